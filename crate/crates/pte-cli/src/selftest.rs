//! Built-in fixture suite behind the selftest subcommand. Every entry
//! pins values the library must reproduce exactly; a failure message
//! carries the offending side.

use pte::{
    apply_latin, construct_three_letter, construct_two_letter, count_pte, enumerate_pte,
    kernel_witness, min_length, prouhet_word, reduce_by_swaps, shuffle, swap, taylor_bound,
    thue_morse, verify_pouring, Density, LatinSquare, SearchSpec, SplitSpec, SwapSpec, Word,
};

pub struct Fixture {
    pub name: &'static str,
    pub run: fn() -> Outcome,
}

pub type Outcome = Result<(), String>;

fn lib<T>(value: pte::Result<T>) -> Result<T, String> {
    value.map_err(|e| e.to_string())
}

fn ensure(ok: bool, detail: &str) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(detail.to_string())
    }
}

fn word(text: &str) -> Result<Word, String> {
    lib(Word::parse(text, None))
}

fn max_reg(text: &str) -> Result<i32, String> {
    lib(word(text)?.max_regularity())
}

fn count(m: usize, b: usize, r: i32) -> Result<u64, String> {
    lib(count_pte(&lib(SearchSpec::new(m, b, r))?))
}

fn near(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol
}

fn table_det(square: &LatinSquare) -> String {
    square.numeric_matrix().det().to_string()
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            name: "check-eight-letter",
            run: || {
                let report = lib(word("ABBABAAB")?.report())?;
                ensure(report.length == 8 && report.alphabet_size == 2, "shape")?;
                ensure(report.max_regularity == 2, "max regularity should be 2")?;
                ensure(
                    report.blocks == vec![vec![1, 4, 6, 7], vec![2, 3, 5, 8]],
                    "blocks should be 1 4 6 7 | 2 3 5 8",
                )
            },
        },
        Fixture {
            name: "check-sixteen-letter",
            run: || {
                let w = lib(thue_morse(16))?;
                ensure(w.to_string() == "ABBABAABBAABABBA", "prefix mismatch")?;
                ensure(lib(w.max_regularity())? == 3, "max regularity should be 3")
            },
        },
        Fixture {
            name: "power-sum-columns",
            run: || {
                let table = word("ABBABAAB")?.power_sums(3);
                for degree in 0..=2 {
                    ensure(table.column_constant(degree), "columns 0..=2 should agree")?;
                }
                ensure(!table.column_constant(3), "degree 3 should split")?;
                ensure(table.sum(0, 1).to_string() == "18", "first moment should be 18")?;
                ensure(table.sum(0, 2).to_string() == "102", "second moment should be 102")?;
                ensure(table.sum(0, 3).to_string() == "624", "block A cubes should be 624")?;
                ensure(table.sum(1, 3).to_string() == "672", "block B cubes should be 672")
            },
        },
        Fixture {
            name: "regularity-landmarks",
            run: || {
                ensure(max_reg("AB")? == 0, "AB should be exactly 0-regular")?;
                ensure(max_reg("ABBA")? == 1, "ABBA should be exactly 1-regular")?;
                ensure(max_reg("ABCCBA")? == 1, "ABCCBA should be exactly 1-regular")?;
                ensure(max_reg("ADAD")? == -1, "ADAD skips letters, so not 0-regular")
            },
        },
        Fixture {
            name: "count-two-letter-landmarks",
            run: || {
                for (m, r) in [(2usize, 0i32), (4, 1), (8, 2), (16, 3)] {
                    ensure(
                        count(m, 2, r)? == 1,
                        &format!("length {m} regularity {r} should have one word"),
                    )?;
                }
                Ok(())
            },
        },
        Fixture {
            name: "count-three-letter-small",
            run: || {
                let spec = lib(SearchSpec::new(6, 3, 1))?;
                let words = lib(enumerate_pte(&spec))?;
                ensure(words.len() == 1, "exactly one word of length 6")?;
                ensure(words[0].to_string() == "ABCCBA", "it should be ABCCBA")?;
                ensure(count(18, 3, 2)? == 9, "length 18 should have nine words")
            },
        },
        Fixture {
            name: "count-thirty-six",
            run: || ensure(count(36, 3, 3)? == 152, "length 36 should have 152 words"),
        },
        Fixture {
            name: "count-empty-shapes",
            run: || {
                ensure(count(4, 2, 2)? == 0, "no 2-regular word of length 4")?;
                ensure(count(9, 3, 2)? == 0, "no 2-regular word of length 9")
            },
        },
        Fixture {
            name: "min-lengths-three-letters",
            run: || {
                ensure(lib(min_length(3, 1, 36))? == Some(6), "first 1-regular at 6")?;
                ensure(lib(min_length(3, 2, 36))? == Some(18), "first 2-regular at 18")?;
                ensure(lib(min_length(3, 3, 36))? == Some(36), "first 3-regular at 36")
            },
        },
        Fixture {
            name: "latin-cyclic-det",
            run: || {
                // |det| of the n-cycle table is (n+1) n^(n-1) / 2
                for (n, expected) in [(2usize, "3"), (3, "18"), (4, "160"), (5, "1875")] {
                    let det = table_det(&lib(LatinSquare::cyclic(n))?);
                    ensure(
                        det.trim_start_matches('-') == expected,
                        &format!("cyclic({n}) determinant should be +-{expected}, got {det}"),
                    )?;
                }
                Ok(())
            },
        },
        Fixture {
            name: "latin-singular-fixtures",
            run: || {
                let klein = lib(LatinSquare::product_group(2, 2))?;
                ensure(table_det(&klein) == "0", "the 4-group table is singular")?;
                let seven = LatinSquare::seven_singular();
                ensure(table_det(&seven) == "0", "the 7x7 fixture table is singular")?;
                ensure(
                    seven.encode().numeric_matrix().det().to_string() != "0",
                    "its encoding is not",
                )
            },
        },
        Fixture {
            name: "latin-encode-involution",
            run: || {
                for square in lib(LatinSquare::enumerate_all(3, false))? {
                    let thrice = square.encode().encode().encode();
                    ensure(thrice == square, "encoding three times is the identity")?;
                }
                for n in [4usize, 5] {
                    let square = lib(LatinSquare::cyclic(n))?;
                    ensure(
                        square.encode().encode().encode() == square,
                        "encoding three times is the identity",
                    )?;
                }
                Ok(())
            },
        },
        Fixture {
            name: "witness-klein",
            run: || {
                let klein = lib(LatinSquare::product_group(2, 2))?;
                let witness = kernel_witness(&klein).ok_or("the 4-group needs a witness")?;
                let w = lib(witness.counterexample_word())?;
                ensure(w.to_string() == "AADD", "witness word should be AADD")?;
                ensure(lib(w.max_regularity())? == -1, "AADD is not 0-regular")?;
                let lifted = lib(apply_latin(&klein, &w))?;
                ensure(lifted.is_regular(1), "yet its expansion is 1-regular")
            },
        },
        Fixture {
            name: "witness-two-by-three",
            run: || {
                let square = lib(LatinSquare::product_group(2, 3))?;
                let witness = kernel_witness(&square).ok_or("the 6-group needs a witness")?;
                let w = lib(witness.counterexample_word())?;
                ensure(w.to_string() == "AACEEF", "witness word should be AACEEF")?;
                ensure(!w.is_regular(0), "AACEEF is not 0-regular")?;
                let lifted = lib(apply_latin(&square, &w))?;
                ensure(lifted.is_regular(1), "yet its expansion is 1-regular")
            },
        },
        Fixture {
            name: "expand-three-cycle",
            run: || {
                let square = lib(LatinSquare::parse("ACB\nBAC\nCBA"))?;
                let w = lib(Word::parse("AB", Some(3)))?;
                let lifted = lib(apply_latin(&square, &w))?;
                ensure(lifted.to_string() == "ABCABC", "AB should expand to ABCABC")
            },
        },
        Fixture {
            name: "prouhet-towers",
            run: || {
                let two = lib(prouhet_word(2, 3))?;
                ensure(two.to_string() == "ABBABAAB", "level 3 over two letters")?;
                ensure(lib(two.max_regularity())? == 2, "it is exactly 2-regular")?;
                let three = lib(prouhet_word(3, 2))?;
                ensure(three.to_string() == "ABCBCACAB", "level 2 over three letters")?;
                ensure(lib(three.max_regularity())? == 1, "it is exactly 1-regular")
            },
        },
        Fixture {
            name: "shuffle-pairs",
            run: || {
                let interleave = |left: &str, right: &str| -> Result<String, String> {
                    Ok(lib(shuffle(&[word(left)?, word(right)?]))?.to_string())
                };
                ensure(
                    interleave("ABBA", "BAAB")? == "ABBABAAB",
                    "ABBA with BAAB gives the 8-letter word",
                )?;
                ensure(
                    interleave("ABBA", "ABBA")? == "AABBBBAA",
                    "ABBA with itself doubles every letter",
                )?;
                let wide: Vec<Word> = ["AB", "BC", "CA"]
                    .iter()
                    .map(|t| lib(Word::parse(t, Some(3))))
                    .collect::<Result<_, _>>()?;
                ensure(
                    lib(shuffle(&wide))?.to_string() == "ABCBCA",
                    "three two-letter words interleave to ABCBCA",
                )
            },
        },
        Fixture {
            name: "split-pieces",
            run: || {
                let spec = SplitSpec {
                    word: word("ABBABAAB")?,
                    cuts: vec![4],
                };
                let pieces = lib(pte::k_split(&spec, 1))?;
                let pieces: Vec<String> = pieces.iter().map(|p| p.to_string()).collect();
                ensure(pieces == ["ABBA", "BAAB"], "halves are ABBA and BAAB")?;
                let bad = SplitSpec {
                    word: word("ABBABAAB")?,
                    cuts: vec![4, 6],
                };
                ensure(
                    pte::k_split(&bad, 1).is_err(),
                    "two-letter pieces cannot be 1-regular",
                )
            },
        },
        Fixture {
            name: "swap-halves",
            run: || {
                let swapped = lib(swap(&SwapSpec {
                    word: word("ABBABAAB")?,
                    first: 0..4,
                    second: 4..8,
                    regularity: 2,
                }))?;
                ensure(swapped.to_string() == "BAABABBA", "halves should trade places")?;
                ensure(swapped.is_regular(2), "the swap preserves 2-regularity")
            },
        },
        Fixture {
            name: "reduce-descent",
            run: || {
                let steps = lib(reduce_by_swaps(&word("ABBABAAB")?))?;
                ensure(steps.len() == 2, "two swaps suffice")?;
                ensure(
                    steps[0].word.to_string() == "ABABBABA",
                    "first stop is ABABBABA",
                )?;
                ensure(
                    steps[1].word.to_string() == "AABBBBAA",
                    "descent ends at AABBBBAA",
                )
            },
        },
        Fixture {
            name: "two-letter-family",
            run: || {
                ensure(
                    lib(construct_two_letter(8, 2))?.to_string() == "ABBABAAB",
                    "length 8",
                )?;
                ensure(
                    lib(construct_two_letter(12, 2))?.to_string() == "ABABBBAAABAB",
                    "length 12",
                )?;
                ensure(
                    lib(construct_two_letter(16, 3))?.to_string() == "ABBABAABBAABABBA",
                    "length 16",
                )?;
                let w = lib(construct_two_letter(20, 2))?;
                ensure(w.len() == 20 && w.is_regular(2), "length 20 is 2-regular")
            },
        },
        Fixture {
            name: "three-letter-family",
            run: || {
                ensure(
                    lib(construct_three_letter(6, 1))?.to_string() == "ABCCBA",
                    "length 6",
                )?;
                for (n, r) in [(9usize, 1i32), (12, 1), (18, 2), (27, 2), (36, 3), (54, 3)] {
                    let w = lib(construct_three_letter(n, r))?;
                    ensure(
                        w.len() == n && w.is_regular(r),
                        &format!("length {n} should be {r}-regular"),
                    )?;
                }
                Ok(())
            },
        },
        Fixture {
            name: "pour-parabola",
            run: || {
                let report = lib(verify_pouring(
                    &lib(Density::parse("poly:0,0,1"))?,
                    &word("ABBABAAB")?,
                    None,
                ))?;
                for amount in &report.cup_amounts {
                    ensure(near(*amount, 1.0 / 6.0, 1e-9), "each cup holds a sixth")?;
                }
                ensure(report.disparity <= 1e-12, "cups agree to quadrature noise")?;
                ensure(report.bound == Some(0.0), "third derivative vanishes")?;
                ensure(report.switches == 5, "the order switches cups five times")
            },
        },
        Fixture {
            name: "pour-exponential",
            run: || {
                let report = lib(verify_pouring(
                    &lib(Density::parse("exp:1"))?,
                    &word("ABBABAAB")?,
                    None,
                ))?;
                let bound = report.bound.ok_or("bound should exist")?;
                ensure(near(bound, 1.0 / 48.0, 1e-15), "bound is 1/48")?;
                ensure(report.disparity <= bound + 1e-10, "disparity clears the bound")?;
                let total: f64 = report.cup_amounts.iter().sum();
                ensure(
                    near(total, 1.0 - (-1.0f64).exp(), 1e-9),
                    "cups sum to the whole pot",
                )
            },
        },
        Fixture {
            name: "pour-linear",
            run: || {
                let report = lib(verify_pouring(
                    &lib(Density::parse("poly:0,1"))?,
                    &word("ABBA")?,
                    None,
                ))?;
                ensure(near(report.cup_amounts[0], 0.25, 1e-12), "cup A holds a quarter")?;
                ensure(near(report.cup_amounts[1], 0.25, 1e-12), "cup B holds a quarter")?;
                ensure(report.disparity <= 1e-12, "perfect split")
            },
        },
        Fixture {
            name: "taylor-bound-table",
            run: || {
                ensure(
                    near(taylor_bound(1.0, 1, 2), 1.0 / 8.0, 1e-18),
                    "1-regular two cups: 1/8",
                )?;
                ensure(
                    near(taylor_bound(1.0, 2, 2), 1.0 / 48.0, 1e-18),
                    "2-regular two cups: 1/48",
                )?;
                ensure(
                    near(taylor_bound(2.0, 3, 3), 1.0 / 288.0, 1e-18),
                    "3-regular three cups: 1/288",
                )
            },
        },
    ]
}
