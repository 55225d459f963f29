//! Operations that make new regular words from old ones.
//!
//! The centerpiece is the Latin-square expansion: a normalized square of
//! size b turns a word w over b letters into the concatenation of the b
//! column images of w, and the expansion of an r-regular word is always
//! (r+1)-regular. Around it sit the closure operations (concatenation,
//! shuffling, swapping, splitting) and the closed constructions that
//! produce a word of any feasible length and regularity over two or three
//! letters.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::latin::LatinSquare;
use crate::word::{Word, MAX_ALPHABET};

/// Lexicographically first 1-regular word of length 9 over three letters,
/// found by the pruned search; it coincides with the level-2 cyclic
/// expansion of A.
const BASE_NINE: &str = "ABCBCACAB";
/// Lexicographically first 2-regular words of lengths 18 and 27.
const BASE_EIGHTEEN: &str = "ABBCCACCAABBBACBAC";
const BASE_TWENTY_SEVEN: &str = "AABBCBCCCCAABBCABACABABABCC";
/// Lexicographically first 3-regular word of length 36.
const BASE_THIRTY_SIX: &str = "AABBCCCBCBCACABABAABABACACBCBCCCBBAA";
/// The shortest 2-regular two-letter words: lengths 8 and 12.
const BASE_EIGHT: &str = "ABBABAAB";
const BASE_TWELVE: &str = "ABABBBAAABAB";

/// Construction sizes are capped to keep materialized words sane.
const LETTER_BUDGET: u128 = 1_000_000;

/// Expands w to w pi_2(w) ... pi_b(w), where pi_k sends each letter to its
/// image in column k of the square. Column 1 of a normalized square is the
/// identity, so the first chunk is w itself. A square handed in out of
/// normal form is normalized first, never rejected (callers who care can
/// test is_normalized themselves). The expansion of an r-regular word is
/// (r+1)-regular.
pub fn apply_latin(square: &LatinSquare, word: &Word) -> Result<Word> {
    if square.size() != word.alphabet_size() {
        return Err(Error::AlphabetMismatch {
            square: square.size(),
            word: word.alphabet_size(),
        });
    }
    let normalized;
    let square = if square.is_normalized() {
        square
    } else {
        normalized = square.normalize();
        &normalized
    };
    let perms = square.as_permutations()?;
    let mut letters = Vec::with_capacity(word.len() * perms.len());
    for perm in &perms {
        for &l in word.letters() {
            letters.push(perm[l as usize]);
        }
    }
    Word::new(word.alphabet_size(), letters)
}

/// A requested exchange of two disjoint subwords, with the regularity the
/// caller wants preserved.
#[derive(Clone, Debug)]
pub struct SwapSpec {
    pub word: Word,
    pub first: Range<usize>,
    pub second: Range<usize>,
    pub regularity: i32,
}

/// Exchanges the two spans: for w = x v y w' z the result is x w' y v z.
/// This preserves r-regularity whenever the word is r-regular, both pieces
/// are (r-1)-regular, and either the pieces have equal length or the gap y
/// between them is itself (r-1)-regular.
pub fn swap(spec: &SwapSpec) -> Result<Word> {
    let m = spec.word.len();
    let (a, b) = (&spec.first, &spec.second);
    if a.start >= a.end || b.start >= b.end {
        return Err(Error::InvalidSpans("both spans must be nonempty".into()));
    }
    if a.end > b.start {
        return Err(Error::InvalidSpans(format!(
            "spans {}..{} and {}..{} must be disjoint and in order",
            a.start, a.end, b.start, b.end
        )));
    }
    if b.end > m {
        return Err(Error::InvalidSpans(format!(
            "span end {} past word length {m}",
            b.end
        )));
    }
    let r = spec.regularity;
    let piece_r = r.saturating_sub(1);
    if !spec.word.is_regular(r) {
        return Err(Error::SwapPrecondition(format!("word is not {r}-regular")));
    }
    let v = subword(&spec.word, a.clone());
    let w = subword(&spec.word, b.clone());
    if !v.is_regular(piece_r) {
        return Err(Error::SwapPrecondition(format!(
            "first piece \"{v}\" is not {piece_r}-regular"
        )));
    }
    if !w.is_regular(piece_r) {
        return Err(Error::SwapPrecondition(format!(
            "second piece \"{w}\" is not {piece_r}-regular"
        )));
    }
    if v.len() != w.len() {
        let gap = subword(&spec.word, a.end..b.start);
        if !gap.is_regular(piece_r) {
            return Err(Error::SwapPrecondition(format!(
                "pieces differ in length and the gap \"{gap}\" is not {piece_r}-regular"
            )));
        }
    }
    let letters = spec.word.letters();
    let mut out = Vec::with_capacity(m);
    out.extend_from_slice(&letters[..a.start]);
    out.extend_from_slice(&letters[b.clone()]);
    out.extend_from_slice(&letters[a.end..b.start]);
    out.extend_from_slice(&letters[a.clone()]);
    out.extend_from_slice(&letters[b.end..]);
    let swapped = Word::new(spec.word.alphabet_size(), out)?;
    debug_assert!(swapped.is_regular(r));
    Ok(swapped)
}

/// Concatenation over a shared alphabet; r-regularity of both sides
/// carries over to the result.
pub fn concat(left: &Word, right: &Word) -> Result<Word> {
    if left.alphabet_size() != right.alphabet_size() {
        return Err(Error::Mismatch(format!(
            "concat needs one alphabet, got {} and {} letters",
            left.alphabet_size(),
            right.alphabet_size()
        )));
    }
    let mut letters = left.letters().to_vec();
    letters.extend_from_slice(right.letters());
    Word::new(left.alphabet_size(), letters)
}

/// A word together with the cut positions that slice it into pieces; a cut
/// at c separates positions c and c+1.
#[derive(Clone, Debug)]
pub struct SplitSpec {
    pub word: Word,
    pub cuts: Vec<usize>,
}

/// Slices the word at the cuts and returns the pieces provided every one
/// of them is k-regular; the first piece that is not aborts the split.
/// Pieces may differ in length.
pub fn k_split(spec: &SplitSpec, k: i32) -> Result<Vec<Word>> {
    let m = spec.word.len();
    let mut bounds = Vec::with_capacity(spec.cuts.len() + 2);
    bounds.push(0);
    for &c in &spec.cuts {
        if c <= *bounds.last().expect("nonempty") || c >= m {
            return Err(Error::InvalidSpans(format!(
                "cuts must be strictly increasing and inside 1..{m}, got {c}"
            )));
        }
        bounds.push(c);
    }
    bounds.push(m);
    let mut pieces = Vec::with_capacity(bounds.len() - 1);
    for (i, pair) in bounds.windows(2).enumerate() {
        let piece = subword(&spec.word, pair[0]..pair[1]);
        if !piece.is_regular(k) {
            return Err(Error::SplitPiece {
                index: i,
                word: piece.to_string(),
                regularity: k,
            });
        }
        pieces.push(piece);
    }
    Ok(pieces)
}

/// Interleaves equal-length words over one alphabet: position t of the
/// output cycle takes letter t of each word in turn. A shuffle of
/// r-regular words is r-regular.
pub fn shuffle(words: &[Word]) -> Result<Word> {
    let Some(first) = words.first() else {
        return Err(Error::Mismatch("shuffle needs at least one word".into()));
    };
    let (b, len) = (first.alphabet_size(), first.len());
    for w in words {
        if w.alphabet_size() != b || w.len() != len {
            return Err(Error::Mismatch(format!(
                "shuffle needs equal alphabets and lengths; got {b} letters / length {len} \
                 and {} letters / length {}",
                w.alphabet_size(),
                w.len()
            )));
        }
    }
    let mut letters = Vec::with_capacity(len * words.len());
    for t in 0..len {
        for w in words {
            letters.push(w.letters()[t]);
        }
    }
    Word::new(b, letters)
}

/// One move of the two-letter reduction: the BA pair starting at `descent`
/// traded places with the AB pair starting at `ascent`, producing `word`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SwapStep {
    pub descent: usize,
    pub ascent: usize,
    pub word: Word,
}

/// Repeatedly exchanges the leftmost BA with the nearest disjoint AB to
/// its right. Each exchange is a regularity-preserving swap and strictly
/// decreases the word lexicographically, so the walk is finite and ends at
/// the canonical 1-regular form A^k B^2k A^k.
pub fn reduce_by_swaps(word: &Word) -> Result<Vec<SwapStep>> {
    if word.alphabet_size() != 2 {
        return Err(Error::SwapPrecondition(
            "reduction works on two-letter words".into(),
        ));
    }
    if !word.is_regular(1) {
        return Err(Error::SwapPrecondition("word is not 1-regular".into()));
    }
    let mut current = word.clone();
    let mut steps = Vec::new();
    loop {
        let letters = current.letters();
        let pairs = letters.len().saturating_sub(1);
        let Some(p) = (0..pairs).find(|&p| letters[p] == 1 && letters[p + 1] == 0) else {
            break;
        };
        let Some(q) = (p + 2..pairs).find(|&q| letters[q] == 0 && letters[q + 1] == 1) else {
            break;
        };
        let next = swap(&SwapSpec {
            word: current,
            first: p..p + 2,
            second: q..q + 2,
            regularity: 1,
        })?;
        steps.push(SwapStep {
            descent: p,
            ascent: q,
            word: next.clone(),
        });
        current = next;
    }
    debug_assert!({
        let k = current.len() / 4;
        let mut expect = vec![0u8; k];
        expect.extend(std::iter::repeat(1u8).take(2 * k));
        expect.extend(std::iter::repeat(0u8).take(k));
        current.letters() == expect
    });
    Ok(steps)
}

/// Prefix of the two-letter word obtained by iterating the order-2 cyclic
/// expansion on A; successive iterates extend each other, so every prefix
/// is well defined. Prefixes of length 2^(r+1) are r-regular.
pub fn thue_morse(length: usize) -> Result<Word> {
    if length == 0 {
        return Err(Error::Construction("prefix length must be at least 1".into()));
    }
    if length as u128 > LETTER_BUDGET {
        return Err(Error::TooLarge(format!(
            "{length} letters exceed the {LETTER_BUDGET}-letter construction cap"
        )));
    }
    let doubler = LatinSquare::cyclic(2)?;
    let mut w = Word::new(2, vec![0])?;
    while w.len() < length {
        w = apply_latin(&doubler, &w)?;
    }
    Word::new(2, w.letters()[..length].to_vec())
}

/// Iterates the order-b cyclic expansion `level` times starting from A:
/// length b^level, maximal regularity exactly level - 1 (each expansion
/// by a square with invertible encoding raises it by exactly one).
pub fn prouhet_word(alphabet_size: usize, level: u32) -> Result<Word> {
    if !(2..=MAX_ALPHABET).contains(&alphabet_size) {
        return Err(Error::Construction(format!(
            "alphabet size {alphabet_size} out of range 2..={MAX_ALPHABET}"
        )));
    }
    if level == 0 {
        return Err(Error::Construction("level must be at least 1".into()));
    }
    (alphabet_size as u128)
        .checked_pow(level)
        .filter(|&n| n <= LETTER_BUDGET)
        .ok_or_else(|| {
            Error::TooLarge(format!(
                "{alphabet_size}^{level} letters exceed the {LETTER_BUDGET}-letter construction cap"
            ))
        })?;
    let square = LatinSquare::cyclic(alphabet_size)?;
    let mut w = Word::new(alphabet_size, vec![0])?;
    for _ in 0..level {
        w = apply_latin(&square, &w)?;
    }
    Ok(w)
}

/// An r-regular two-letter word of length n, for any n = k * 2^r with
/// k >= 2 and r >= 2. The base r = 2 concatenates copies of the 8- and
/// 12-letter 2-regular words (k splits as a sum of 2s and 3s); higher r
/// applies the order-2 cyclic expansion to the half-length word.
pub fn construct_two_letter(length: usize, regularity: i32) -> Result<Word> {
    if regularity < 2 {
        return Err(Error::Construction(
            "two-letter construction starts at regularity 2".into(),
        ));
    }
    check_budget(length)?;
    let k = factor_out(length, 2, regularity as u32, 2)?;
    if regularity == 2 {
        let (pairs, triples) = split_into_twos_and_threes(k);
        let eight = Word::parse(BASE_EIGHT, None)?;
        let twelve = Word::parse(BASE_TWELVE, None)?;
        return repeat_concat(&[(eight, pairs), (twelve, triples)]);
    }
    let half = construct_two_letter(length / 2, regularity - 1)?;
    apply_latin(&LatinSquare::cyclic(2)?, &half)
}

/// An r-regular three-letter word of length n, covering the full feasible
/// range: r = 1 needs n = 3k, r = 2 needs n = 9k, and r >= 3 needs
/// n = 2k * 3^(r-1), each with k >= 2. Bases are the stored shortest
/// words; the inductive step applies the order-3 cyclic expansion.
pub fn construct_three_letter(length: usize, regularity: i32) -> Result<Word> {
    check_budget(length)?;
    match regularity {
        1 => {
            let k = factor_out(length, 3, 1, 2)?;
            let (pairs, triples) = split_into_twos_and_threes(k);
            let six = Word::parse("ABCCBA", None)?;
            let nine = Word::parse(BASE_NINE, None)?;
            repeat_concat(&[(six, pairs), (nine, triples)])
        }
        2 => {
            let k = factor_out(length, 3, 2, 2)?;
            let (pairs, triples) = split_into_twos_and_threes(k);
            let eighteen = Word::parse(BASE_EIGHTEEN, None)?;
            let twenty_seven = Word::parse(BASE_TWENTY_SEVEN, None)?;
            repeat_concat(&[(eighteen, pairs), (twenty_seven, triples)])
        }
        3 => {
            if length % 2 != 0 {
                return Err(Error::Construction(format!(
                    "length {length} is not 2k * 9 with k >= 2"
                )));
            }
            let k = factor_out(length / 2, 3, 2, 2)?;
            let (pairs, triples) = split_into_twos_and_threes(k);
            let thirty_six = Word::parse(BASE_THIRTY_SIX, None)?;
            let fifty_four =
                apply_latin(&LatinSquare::cyclic(3)?, &Word::parse(BASE_EIGHTEEN, None)?)?;
            repeat_concat(&[(thirty_six, pairs), (fifty_four, triples)])
        }
        r if r >= 4 => {
            let stride = 2u128
                * 3u128.checked_pow(r as u32 - 1).ok_or_else(|| {
                    Error::Construction(format!("regularity {r} out of range"))
                })?;
            if length as u128 % stride != 0 || (length as u128) / stride < 2 {
                return Err(Error::Construction(format!(
                    "length {length} is not 2k * 3^{} with k >= 2",
                    r - 1
                )));
            }
            let inner = construct_three_letter(length / 3, r - 1)?;
            apply_latin(&LatinSquare::cyclic(3)?, &inner)
        }
        _ => Err(Error::Construction(
            "three-letter construction starts at regularity 1".into(),
        )),
    }
}

/// Adjacent positions holding different letters: the number of context
/// changes when the word is read as a schedule.
pub fn switch_count(word: &Word) -> usize {
    word.letters().windows(2).filter(|p| p[0] != p[1]).count()
}

fn subword(word: &Word, range: Range<usize>) -> Word {
    Word::new(word.alphabet_size(), word.letters()[range].to_vec())
        .expect("subword keeps the alphabet")
}

fn check_budget(length: usize) -> Result<()> {
    if length as u128 > LETTER_BUDGET {
        return Err(Error::TooLarge(format!(
            "{length} letters exceed the {LETTER_BUDGET}-letter construction cap"
        )));
    }
    Ok(())
}

/// The multiplier k in length = k * base^power, or an error if the shape
/// does not hold with k >= minimum.
fn factor_out(length: usize, base: u128, power: u32, minimum: u128) -> Result<usize> {
    let stride = base
        .checked_pow(power)
        .ok_or_else(|| Error::Construction(format!("regularity {power} out of range")))?;
    let n = length as u128;
    if n % stride != 0 || n / stride < minimum {
        return Err(Error::Construction(format!(
            "length {length} is not k * {base}^{power} with k >= {minimum}"
        )));
    }
    Ok((n / stride) as usize)
}

/// k >= 2 written as 2a + 3c with c minimal (so c is 0 or 1).
fn split_into_twos_and_threes(k: usize) -> (usize, usize) {
    if k % 2 == 0 {
        (k / 2, 0)
    } else {
        ((k - 3) / 2, 1)
    }
}

fn repeat_concat(parts: &[(Word, usize)]) -> Result<Word> {
    let alphabet = parts[0].0.alphabet_size();
    let mut out = Word::new(alphabet, Vec::new())?;
    for (word, copies) in parts {
        for _ in 0..*copies {
            out = concat(&out, word)?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        Word::parse(s, None).unwrap()
    }

    fn word_over(s: &str, b: usize) -> Word {
        Word::parse(s, Some(b)).unwrap()
    }

    #[test]
    fn expansion_doubles_the_eight_letter_word() {
        let doubler = LatinSquare::cyclic(2).unwrap();
        let out = apply_latin(&doubler, &word("ABBABAAB")).unwrap();
        assert_eq!(out.to_string(), "ABBABAABBAABABBA");
    }

    #[test]
    fn expansion_of_a_two_letter_start_over_three_letters() {
        let square = LatinSquare::parse("ACB\nBAC\nCBA").unwrap();
        let out = apply_latin(&square, &word_over("AB", 3)).unwrap();
        assert_eq!(out.to_string(), "ABCABC");
    }

    #[test]
    fn expansion_checks_alphabet_and_normalizes_first() {
        let three = LatinSquare::cyclic(3).unwrap();
        assert!(matches!(
            apply_latin(&three, &word("AB")),
            Err(Error::AlphabetMismatch { square: 3, word: 2 })
        ));
        // Rows out of order are normalized, not rejected.
        let crooked = LatinSquare::parse("BA\nAB").unwrap();
        let straight = LatinSquare::cyclic(2).unwrap();
        assert_eq!(
            apply_latin(&crooked, &word("ABBA")).unwrap(),
            apply_latin(&straight, &word("ABBA")).unwrap()
        );
    }

    #[test]
    fn klein_expansion_jumps_two_regularity_levels() {
        let klein = LatinSquare::product_group(2, 2).unwrap();
        let flat = word_over("ADAD", 4);
        assert_eq!(flat.max_regularity().unwrap(), -1);
        let lifted = apply_latin(&klein, &flat).unwrap();
        assert_eq!(lifted.to_string(), "ADADBCBCCBCBDADA");
        assert!(lifted.is_regular(1));

        let balanced = word_over("BCCBADDA", 4);
        assert_eq!(balanced.max_regularity().unwrap(), 0);
        assert!(apply_latin(&klein, &balanced).unwrap().is_regular(2));
    }

    #[test]
    fn swap_equal_length_pieces() {
        let out = swap(&SwapSpec {
            word: word("BAAB"),
            first: 0..2,
            second: 2..4,
            regularity: 1,
        })
        .unwrap();
        assert_eq!(out.to_string(), "ABBA");

        let halves = swap(&SwapSpec {
            word: word("ABBABAAB"),
            first: 0..4,
            second: 4..8,
            regularity: 2,
        })
        .unwrap();
        assert_eq!(halves.to_string(), "BAABABBA");
        assert!(halves.is_regular(2));
    }

    #[test]
    fn swap_identical_pieces_is_identity() {
        let out = swap(&SwapSpec {
            word: word("ABBABAAB"),
            first: 0..2,
            second: 6..8,
            regularity: 1,
        })
        .unwrap();
        assert_eq!(out, word("ABBABAAB"));
    }

    #[test]
    fn swap_unequal_pieces_lean_on_the_gap() {
        // ABAB is 0-regular; exchanging A with AB across the gap B is fine
        // because every word is (-1)-regular.
        let out = swap(&SwapSpec {
            word: word("ABAB"),
            first: 0..1,
            second: 2..4,
            regularity: 0,
        })
        .unwrap();
        assert_eq!(out.to_string(), "ABBA");
    }

    #[test]
    fn swap_rejects_bad_requests() {
        let spans = swap(&SwapSpec {
            word: word("ABBA"),
            first: 0..3,
            second: 2..4,
            regularity: 1,
        });
        assert!(matches!(spans, Err(Error::InvalidSpans(_))));

        let not_regular = swap(&SwapSpec {
            word: word("AB"),
            first: 0..1,
            second: 1..2,
            regularity: 1,
        });
        assert!(
            matches!(not_regular, Err(Error::SwapPrecondition(ref msg)) if msg.contains("word"))
        );

        let piece = swap(&SwapSpec {
            word: word("ABBABAAB"),
            first: 0..2,
            second: 4..6,
            regularity: 2,
        });
        assert!(matches!(piece, Err(Error::SwapPrecondition(ref msg)) if msg.contains("first piece")));

        // AB and BAAB are both 0-regular but the one-letter gap is not.
        let gap = swap(&SwapSpec {
            word: word("ABBAABBA"),
            first: 0..2,
            second: 3..7,
            regularity: 1,
        });
        assert!(matches!(gap, Err(Error::SwapPrecondition(ref msg)) if msg.contains("gap")));
    }

    #[test]
    fn concat_joins_words_over_one_alphabet() {
        let joined = concat(&word(BASE_EIGHT), &word(BASE_TWELVE)).unwrap();
        assert_eq!(joined.len(), 20);
        assert!(joined.is_regular(2));

        let doubled = concat(&word("ABBA"), &word("ABBA")).unwrap();
        assert!(doubled.is_regular(1));

        let empty = Word::new(2, vec![]).unwrap();
        assert_eq!(concat(&word("ABBA"), &empty).unwrap(), word("ABBA"));

        assert!(matches!(
            concat(&word("AB"), &word_over("AB", 3)),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn split_checks_every_piece() {
        let pieces = k_split(
            &SplitSpec {
                word: word("ABBABAAB"),
                cuts: vec![4],
            },
            1,
        )
        .unwrap();
        assert_eq!(pieces, vec![word("ABBA"), word("BAAB")]);

        let quarters = k_split(
            &SplitSpec {
                word: word("ABBABAAB"),
                cuts: vec![2, 4, 6],
            },
            0,
        )
        .unwrap();
        assert_eq!(
            quarters,
            vec![word("AB"), word("BA"), word("BA"), word("AB")]
        );

        let bad = k_split(
            &SplitSpec {
                word: word("ABBABAAB"),
                cuts: vec![4, 6],
            },
            1,
        );
        match bad {
            Err(Error::SplitPiece {
                index,
                word,
                regularity,
            }) => {
                assert_eq!((index, word.as_str(), regularity), (1, "BA", 1));
            }
            other => panic!("expected a split failure, got {other:?}"),
        }

        for cuts in [vec![0], vec![8], vec![4, 4], vec![6, 4]] {
            let spec = SplitSpec {
                word: word("ABBABAAB"),
                cuts,
            };
            assert!(matches!(k_split(&spec, 0), Err(Error::InvalidSpans(_))));
        }
    }

    #[test]
    fn shuffle_interleaves() {
        let triple = shuffle(&[
            word_over("AB", 3),
            word_over("BC", 3),
            word_over("CA", 3),
        ])
        .unwrap();
        assert_eq!(triple.to_string(), "ABCBCA");

        let pair = shuffle(&[word("ABBA"), word("BAAB")]).unwrap();
        assert_eq!(pair.to_string(), "ABBABAAB");

        let twins = shuffle(&[word("ABBA"), word("ABBA")]).unwrap();
        assert_eq!(twins.to_string(), "AABBBBAA");

        assert!(matches!(shuffle(&[]), Err(Error::Mismatch(_))));
        assert!(matches!(
            shuffle(&[word("ABBA"), word("AB")]),
            Err(Error::Mismatch(_))
        ));
        assert!(matches!(
            shuffle(&[word("ABBA"), word_over("ABBA", 3)]),
            Err(Error::Mismatch(_))
        ));
    }

    #[test]
    fn reduction_walks_to_the_canonical_form() {
        assert!(reduce_by_swaps(&word("ABBA")).unwrap().is_empty());

        let steps = reduce_by_swaps(&word("BAAB")).unwrap();
        assert_eq!(steps.len(), 1);
        assert_eq!((steps[0].descent, steps[0].ascent), (0, 2));
        assert_eq!(steps[0].word, word("ABBA"));

        let steps = reduce_by_swaps(&word("ABBABAAB")).unwrap();
        assert_eq!(steps.len(), 2);
        assert_eq!(steps.last().unwrap().word, word("AABBBBAA"));

        assert!(matches!(
            reduce_by_swaps(&word("ABC")),
            Err(Error::SwapPrecondition(_))
        ));
        assert!(matches!(
            reduce_by_swaps(&word("AB")),
            Err(Error::SwapPrecondition(_))
        ));
    }

    #[test]
    fn every_eight_letter_regular_word_reduces_to_one_form() {
        let spec = crate::enumeration::SearchSpec::new(8, 2, 1)
            .unwrap()
            .all_labelings();
        for w in crate::enumeration::enumerate_pte(&spec).unwrap() {
            let steps = reduce_by_swaps(&w).unwrap();
            let last = steps.last().map(|s| s.word.clone()).unwrap_or(w);
            assert_eq!(last.to_string(), "AABBBBAA");
        }
    }

    #[test]
    fn thue_morse_prefixes() {
        assert_eq!(thue_morse(2).unwrap().to_string(), "AB");
        assert_eq!(thue_morse(8).unwrap().to_string(), "ABBABAAB");
        assert_eq!(thue_morse(16).unwrap().to_string(), "ABBABAABBAABABBA");
        let ten = thue_morse(10).unwrap();
        let sixteen = thue_morse(16).unwrap();
        assert_eq!(ten.letters(), &sixteen.letters()[..10]);
        assert!(thue_morse(0).is_err());
    }

    #[test]
    fn prouhet_words() {
        assert_eq!(prouhet_word(3, 1).unwrap().to_string(), "ABC");
        assert_eq!(prouhet_word(3, 2).unwrap().to_string(), "ABCBCACAB");
        assert_eq!(prouhet_word(2, 3).unwrap(), thue_morse(8).unwrap());
        assert_eq!(prouhet_word(2, 4).unwrap().max_regularity().unwrap(), 3);
        assert_eq!(prouhet_word(3, 2).unwrap().max_regularity().unwrap(), 1);

        assert!(matches!(prouhet_word(1, 2), Err(Error::Construction(_))));
        assert!(matches!(prouhet_word(27, 2), Err(Error::Construction(_))));
        assert!(matches!(prouhet_word(3, 0), Err(Error::Construction(_))));
        assert!(matches!(prouhet_word(26, 5), Err(Error::TooLarge(_))));
    }

    #[test]
    fn two_letter_construction_covers_the_feasible_lengths() {
        assert_eq!(construct_two_letter(8, 2).unwrap(), word(BASE_EIGHT));
        assert_eq!(construct_two_letter(12, 2).unwrap(), word(BASE_TWELVE));
        assert_eq!(
            construct_two_letter(16, 2).unwrap().to_string(),
            "ABBABAABABBABAAB"
        );
        let twenty = construct_two_letter(20, 2).unwrap();
        assert!(twenty.is_regular(2));

        let thirty_two = construct_two_letter(32, 3).unwrap();
        let lifted = apply_latin(
            &LatinSquare::cyclic(2).unwrap(),
            &construct_two_letter(16, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(thirty_two, lifted);
        assert!(thirty_two.is_regular(3));

        for (n, r) in [(12, 1), (10, 2), (4, 2), (8, 3)] {
            assert!(
                matches!(construct_two_letter(n, r), Err(Error::Construction(_))),
                "({n},{r}) should be out of range"
            );
        }
    }

    #[test]
    fn three_letter_construction_covers_the_feasible_lengths() {
        assert_eq!(
            construct_three_letter(6, 1).unwrap().to_string(),
            "ABCCBA"
        );
        assert_eq!(construct_three_letter(9, 1).unwrap(), word(BASE_NINE));
        assert!(construct_three_letter(15, 1).unwrap().is_regular(1));
        assert_eq!(
            construct_three_letter(18, 2).unwrap(),
            word(BASE_EIGHTEEN)
        );
        assert_eq!(
            construct_three_letter(27, 2).unwrap(),
            word(BASE_TWENTY_SEVEN)
        );
        assert!(construct_three_letter(45, 2).unwrap().is_regular(2));
        assert_eq!(
            construct_three_letter(36, 3).unwrap(),
            word(BASE_THIRTY_SIX)
        );
        let fifty_four = construct_three_letter(54, 3).unwrap();
        assert!(fifty_four.is_regular(3));
        let ninety = construct_three_letter(90, 3).unwrap();
        assert!(ninety.is_regular(3));
        let deep = construct_three_letter(108, 4).unwrap();
        assert!(deep.is_regular(4));

        for (n, r) in [(3, 1), (6, 2), (9, 3), (12, 0), (27, 3), (54, 4)] {
            assert!(
                matches!(construct_three_letter(n, r), Err(Error::Construction(_))),
                "({n},{r}) should be out of range"
            );
        }
    }

    #[test]
    fn stored_bases_have_exactly_the_advertised_regularity() {
        assert_eq!(word(BASE_NINE).max_regularity().unwrap(), 1);
        assert_eq!(word(BASE_EIGHTEEN).max_regularity().unwrap(), 2);
        assert_eq!(word(BASE_TWENTY_SEVEN).max_regularity().unwrap(), 2);
        assert_eq!(word(BASE_THIRTY_SIX).max_regularity().unwrap(), 3);
        assert_eq!(word(BASE_EIGHT).max_regularity().unwrap(), 2);
        assert_eq!(word(BASE_TWELVE).max_regularity().unwrap(), 2);
    }

    #[test]
    fn switch_counts() {
        assert_eq!(switch_count(&word("ABBABAAB")), 5);
        assert_eq!(switch_count(&word_over("AAAA", 2)), 0);
        assert_eq!(switch_count(&word("ABAB")), 3);
        assert_eq!(switch_count(&Word::new(2, vec![]).unwrap()), 0);
    }
}
