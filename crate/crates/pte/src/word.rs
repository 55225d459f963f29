//! Words over a finite alphabet and the block partitions they encode.
//!
//! A word of length m over b letters assigns every position 1..=m to the
//! block named by its letter, so words and ordered partitions of
//! {1, ..., m} into b (possibly empty) blocks are two views of one object.
//! A partition is r-regular when all blocks agree on the sums of j-th
//! powers of their elements for every degree j = 0..=r; degree 0 counts
//! elements. Every partition is (-1)-regular by convention.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};

/// Letters are written A-Z, which caps usable alphabets at 26.
pub const MAX_ALPHABET: usize = 26;

/// A word over letters A, B, C, ... stored as 0-based letter indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    alphabet_size: usize,
    letters: Vec<u8>,
}

impl Word {
    /// Builds a word from 0-based letter indices.
    pub fn new(alphabet_size: usize, letters: Vec<u8>) -> Result<Word> {
        if alphabet_size < 1 || alphabet_size > MAX_ALPHABET {
            return Err(Error::Parse(format!(
                "alphabet size {alphabet_size} out of range 1..={MAX_ALPHABET}"
            )));
        }
        if let Some(&l) = letters.iter().find(|&&l| l as usize >= alphabet_size) {
            return Err(Error::Parse(format!(
                "letter {} outside alphabet of size {alphabet_size}",
                letter_char(l)
            )));
        }
        Ok(Word {
            alphabet_size,
            letters,
        })
    }

    /// Parses uppercase letters, skipping whitespace. The alphabet size is
    /// the highest letter present (at least 1), or `alphabet` when given.
    pub fn parse(text: &str, alphabet: Option<usize>) -> Result<Word> {
        let mut letters = Vec::with_capacity(text.len());
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            }
            if !c.is_ascii_uppercase() {
                return Err(Error::Parse(format!(
                    "invalid character {c:?} (expected A-Z or whitespace)"
                )));
            }
            letters.push(c as u8 - b'A');
        }
        let seen = letters.iter().map(|&l| l as usize + 1).max().unwrap_or(1);
        let alphabet_size = match alphabet {
            Some(b) => {
                if b < seen {
                    return Err(Error::Parse(format!(
                        "word uses {seen} letters but alphabet size {b} was declared"
                    )));
                }
                b
            }
            None => seen,
        };
        Word::new(alphabet_size, letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    /// Positions (1-based) carrying each letter, in ascending order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks = vec![Vec::new(); self.alphabet_size];
        for (i, &l) in self.letters.iter().enumerate() {
            blocks[l as usize].push(i + 1);
        }
        blocks
    }

    /// The partition of {1, ..., m} read off the word.
    pub fn to_partition(&self) -> Partition {
        let blocks = self
            .blocks()
            .into_iter()
            .map(|b| b.into_iter().map(|p| p as i64).collect())
            .collect();
        Partition { blocks }
    }

    /// Power sums of block elements for degrees 0..=degree.
    pub fn power_sums(&self, degree: usize) -> PowerSumTable {
        PowerSumTable::new(&self.element_view(), self.alphabet_size, degree)
    }

    /// Largest r such that all degree columns 0..=r are constant across
    /// blocks, or -1 if the block sizes already differ. Needs b >= 2: with a
    /// single block every column is constant and no finite answer exists.
    pub fn max_regularity(&self) -> Result<i32> {
        if self.alphabet_size < 2 {
            return Err(Error::UnboundedRegularity);
        }
        Ok(max_regularity_of(
            &self.element_view(),
            self.alphabet_size,
            self.len(),
        ))
    }

    /// Whether all degree columns 0..=r are constant across blocks. Unlike
    /// [`Word::max_regularity`] this is well defined for b = 1 (vacuously
    /// true) and for r = -1 (always true).
    pub fn is_regular(&self, r: i32) -> bool {
        if r < 0 || self.alphabet_size < 2 {
            return true;
        }
        self.max_regularity().map(|m| m >= r).unwrap_or(true)
    }

    /// Relabels letters so first occurrences run A, B, C, ... Letters that
    /// never occur keep their relative order after the used ones.
    pub fn canonicalize(&self) -> Word {
        let mut map = [u8::MAX; MAX_ALPHABET];
        let mut next = 0u8;
        for &l in &self.letters {
            if map[l as usize] == u8::MAX {
                map[l as usize] = next;
                next += 1;
            }
        }
        for slot in map.iter_mut().take(self.alphabet_size) {
            if *slot == u8::MAX {
                *slot = next;
                next += 1;
            }
        }
        Word {
            alphabet_size: self.alphabet_size,
            letters: self.letters.iter().map(|&l| map[l as usize]).collect(),
        }
    }

    /// True when first occurrences already run A, B, C, ...
    pub fn is_canonical(&self) -> bool {
        let mut next = 0u8;
        for &l in &self.letters {
            if l > next {
                return false;
            }
            if l == next {
                next += 1;
            }
        }
        true
    }

    /// JSON-facing summary of the word. Fails for b = 1 because maximal
    /// regularity is undefined there.
    pub fn report(&self) -> Result<WordReport> {
        Ok(WordReport {
            word: self.to_string(),
            alphabet_size: self.alphabet_size,
            length: self.len(),
            max_regularity: self.max_regularity()?,
            blocks: self.blocks(),
        })
    }

    fn element_view(&self) -> Vec<(i64, usize)> {
        self.letters
            .iter()
            .enumerate()
            .map(|(i, &l)| (i as i64 + 1, l as usize))
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &l in &self.letters {
            write!(f, "{}", letter_char(l))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self}, b={})", self.alphabet_size)
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        Word::parse(s, None)
    }
}

pub fn letter_char(l: u8) -> char {
    (b'A' + l) as char
}

/// An ordered partition of a finite set of integers into blocks. Blocks may
/// be empty; elements are pairwise distinct across the whole partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    blocks: Vec<Vec<i64>>,
}

impl Partition {
    pub fn new(blocks: Vec<Vec<i64>>) -> Result<Partition> {
        if blocks.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        let mut seen = BTreeSet::new();
        for block in &blocks {
            for &x in block {
                if !seen.insert(x) {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} appears twice"
                    )));
                }
            }
        }
        let mut blocks = blocks;
        for block in &mut blocks {
            block.sort_unstable();
        }
        Ok(Partition { blocks })
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn element_count(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<i64>] {
        &self.blocks
    }

    /// Maps every element x to shift + scale * x. Regularity is invariant
    /// under such maps, which is what makes {1..m} fixtures portable.
    pub fn affine_map(&self, shift: i64, scale: i64) -> Result<Partition> {
        if scale == 0 {
            return Err(Error::ZeroScale);
        }
        let mut blocks = Vec::with_capacity(self.blocks.len());
        for block in &self.blocks {
            let mut mapped = Vec::with_capacity(block.len());
            for &x in block {
                let y = x
                    .checked_mul(scale)
                    .and_then(|y| y.checked_add(shift))
                    .ok_or_else(|| Error::Overflow(format!("affine image of {x}")))?;
                mapped.push(y);
            }
            mapped.sort_unstable();
            blocks.push(mapped);
        }
        Ok(Partition { blocks })
    }

    pub fn power_sums(&self, degree: usize) -> PowerSumTable {
        PowerSumTable::new(&self.element_view(), self.blocks.len(), degree)
    }

    pub fn max_regularity(&self) -> Result<i32> {
        if self.blocks.len() < 2 {
            return Err(Error::UnboundedRegularity);
        }
        Ok(max_regularity_of(
            &self.element_view(),
            self.blocks.len(),
            self.element_count(),
        ))
    }

    /// Reads the partition back as a word; the elements must be exactly
    /// {1, ..., m} and the block count at most 26.
    pub fn to_word(&self) -> Result<Word> {
        let b = self.blocks.len();
        if b > MAX_ALPHABET {
            return Err(Error::InvalidPartition(format!(
                "{b} blocks exceed the {MAX_ALPHABET}-letter alphabet"
            )));
        }
        let m = self.element_count();
        let mut letters = vec![u8::MAX; m];
        for (l, block) in self.blocks.iter().enumerate() {
            for &x in block {
                if x < 1 || x as usize > m {
                    return Err(Error::InvalidPartition(format!(
                        "element {x} outside 1..={m}"
                    )));
                }
                letters[x as usize - 1] = l as u8;
            }
        }
        // Distinctness plus the range check above force a bijection.
        debug_assert!(letters.iter().all(|&l| l != u8::MAX));
        Word::new(b, letters)
    }

    fn element_view(&self) -> Vec<(i64, usize)> {
        let mut v = Vec::with_capacity(self.element_count());
        for (j, block) in self.blocks.iter().enumerate() {
            v.extend(block.iter().map(|&x| (x, j)));
        }
        v
    }
}

/// Exact power sums per block: entry (x, j) is the sum of j-th powers of
/// the elements in block x. Column 0 holds block sizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumTable {
    degree: usize,
    rows: Vec<Vec<BigInt>>,
}

impl PowerSumTable {
    fn new(elems: &[(i64, usize)], block_count: usize, degree: usize) -> PowerSumTable {
        let mut rows = vec![vec![BigInt::from(0); degree + 1]; block_count];
        let mut pows = PowerState::ones(elems.len());
        for j in 0..=degree {
            match pows.column_sums(elems, block_count) {
                ColumnSums::Small(sums) => {
                    for (row, s) in rows.iter_mut().zip(sums) {
                        row[j] = BigInt::from(s);
                    }
                }
                ColumnSums::Big(sums) => {
                    for (row, s) in rows.iter_mut().zip(sums) {
                        row[j] = s;
                    }
                }
            }
            if j < degree {
                pows.advance(elems, j);
            }
        }
        PowerSumTable { degree, rows }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn block_count(&self) -> usize {
        self.rows.len()
    }

    pub fn sum(&self, block: usize, degree: usize) -> &BigInt {
        &self.rows[block][degree]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn column_constant(&self, degree: usize) -> bool {
        self.rows.iter().all(|r| r[degree] == self.rows[0][degree])
    }
}

/// Running j-th powers of a fixed element list, kept in i128 while they fit
/// and escalated to big integers on the first overflow.
enum PowerState {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

enum ColumnSums {
    Small(Vec<i128>),
    Big(Vec<BigInt>),
}

impl PowerState {
    fn ones(n: usize) -> PowerState {
        PowerState::Small(vec![1; n])
    }

    /// Moves from degree j to j + 1.
    fn advance(&mut self, elems: &[(i64, usize)], current_degree: usize) {
        if let PowerState::Small(pows) = self {
            for (p, &(v, _)) in pows.iter_mut().zip(elems) {
                match p.checked_mul(v as i128) {
                    Some(x) => *p = x,
                    None => {
                        *self = PowerState::Big(big_powers(elems, current_degree + 1));
                        return;
                    }
                }
            }
            return;
        }
        if let PowerState::Big(pows) = self {
            for (p, &(v, _)) in pows.iter_mut().zip(elems) {
                *p *= BigInt::from(v);
            }
        }
    }

    fn column_sums(&mut self, elems: &[(i64, usize)], block_count: usize) -> ColumnSums {
        if let PowerState::Small(pows) = self {
            let mut sums = vec![0i128; block_count];
            let mut ok = true;
            for (&p, &(_, block)) in pows.iter().zip(elems) {
                match sums[block].checked_add(p) {
                    Some(s) => sums[block] = s,
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                return ColumnSums::Small(sums);
            }
            let degree = current_degree_of(pows, elems);
            *self = PowerState::Big(big_powers(elems, degree));
        }
        let PowerState::Big(pows) = self else {
            unreachable!()
        };
        let mut sums = vec![BigInt::from(0); block_count];
        for (p, &(_, block)) in pows.iter().zip(elems) {
            sums[block] += p;
        }
        ColumnSums::Big(sums)
    }
}

fn big_powers(elems: &[(i64, usize)], degree: usize) -> Vec<BigInt> {
    elems
        .iter()
        .map(|&(v, _)| num::pow::pow(BigInt::from(v), degree))
        .collect()
}

/// Recovers j from a power vector when summation overflowed before the
/// multiply step did. Any element with |v| >= 2 pins the degree exactly.
fn current_degree_of(pows: &[i128], elems: &[(i64, usize)]) -> usize {
    for (&p, &(v, _)) in pows.iter().zip(elems) {
        let v = v as i128;
        if v.abs() >= 2 {
            let mut j = 0;
            let mut acc = 1i128;
            while acc != p {
                acc *= v;
                j += 1;
            }
            return j;
        }
    }
    // All elements are in {-1, 0, 1}: their powers cannot overflow a sum
    // of i128s for any realistic length, so this path never runs.
    0
}

/// Shared regularity scan: smallest degree whose column is not constant,
/// minus one. For b >= 2 and m >= 1 some degree <= m/b always fails (equal
/// power sums through degree m/b would force equal blocks), so the loop is
/// finite.
fn max_regularity_of(elems: &[(i64, usize)], block_count: usize, m: usize) -> i32 {
    debug_assert!(block_count >= 2);
    if m == 0 {
        return -1;
    }
    let cap = m / block_count;
    let mut pows = PowerState::ones(elems.len());
    for j in 0..=cap {
        let constant = match pows.column_sums(elems, block_count) {
            ColumnSums::Small(sums) => sums.iter().all(|&s| s == sums[0]),
            ColumnSums::Big(sums) => sums.iter().all(|s| *s == sums[0]),
        };
        if !constant {
            return j as i32 - 1;
        }
        if j < cap {
            pows.advance(elems, j);
        }
    }
    // Unreachable for distinct elements; keep a sane answer for release
    // builds anyway.
    debug_assert!(false, "columns constant beyond degree m/b");
    cap as i32
}

#[derive(Debug, Clone, Serialize)]
pub struct WordReport {
    pub word: String,
    pub alphabet_size: usize,
    pub length: usize,
    pub max_regularity: i32,
    pub blocks: Vec<Vec<usize>>,
}
