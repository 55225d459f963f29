//! Latin squares, their encoding matrices, and exact integer linear algebra.
//!
//! A Latin square of size b is a b x b array in which every row and every
//! column is a permutation of the b letters. A square is normalized when
//! its first column reads A, B, C, ... top to bottom; the columns of a
//! normalized square are then permutations of the alphabet, with the first
//! one the identity.
//!
//! The encoding of a square L is the square E(L) whose (i, j) entry is the
//! column of L in which letter i sits on row j. E is a bijection of order
//! three on Latin squares of each size. Whether the integer matrix E(L) is
//! invertible decides whether expansion by L can raise regularity by more
//! than one step; a singular E(L) yields explicit counterexample words via
//! an integer kernel vector.
//!
//! A square is called singular when its own numeric table has determinant
//! zero. Since E has order three, singular tables and singular encodings
//! are interchangeable: if T is singular then E(E(T)) is the square whose
//! encoding equals T, so it carries a kernel witness.
//!
//! All determinants and kernels here are computed exactly over the
//! integers (fraction-free elimination, big-integer arithmetic). No
//! floating point is involved anywhere in this module.

use std::collections::BTreeSet;
use std::fmt;

use num::rational::BigRational;
use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{letter_char, Word, MAX_ALPHABET};

/// Letters are stored 0-based in a flat row-major array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatinSquare {
    size: usize,
    cells: Vec<u8>,
}

impl LatinSquare {
    /// Builds a square from rows of 0-based letters and validates the
    /// defining property.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<LatinSquare> {
        let n = rows.len();
        if n == 0 || n > 255 {
            return Err(Error::InvalidSquare(format!(
                "size {n} out of range 1..=255"
            )));
        }
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidSquare(format!(
                    "row of length {} in a square of size {n}",
                    row.len()
                )));
            }
            cells.extend_from_slice(row);
        }
        let square = LatinSquare { size: n, cells };
        square.validate()?;
        Ok(square)
    }

    /// Same as [`LatinSquare::from_rows`] but with 1-based numeric entries,
    /// which is how printed fixtures are usually written.
    pub fn from_numeric(rows: &[Vec<usize>]) -> Result<LatinSquare> {
        let n = rows.len();
        let mut converted = Vec::with_capacity(n);
        for row in rows {
            let mut r = Vec::with_capacity(row.len());
            for &v in row {
                if v < 1 || v > n || v > 255 {
                    return Err(Error::InvalidSquare(format!(
                        "entry {v} outside 1..={n}"
                    )));
                }
                r.push((v - 1) as u8);
            }
            converted.push(r);
        }
        LatinSquare::from_rows(&converted)
    }

    /// Parses one row per line, letters A-Z, ignoring blanks.
    pub fn parse(text: &str) -> Result<LatinSquare> {
        let mut rows = Vec::new();
        for line in text.lines() {
            let mut row = Vec::new();
            for c in line.chars() {
                if c.is_whitespace() {
                    continue;
                }
                if !c.is_ascii_uppercase() {
                    return Err(Error::Parse(format!(
                        "invalid character {c:?} in latin square"
                    )));
                }
                row.push(c as u8 - b'A');
            }
            if !row.is_empty() {
                rows.push(row);
            }
        }
        if rows.is_empty() {
            return Err(Error::Parse("empty latin square".into()));
        }
        LatinSquare::from_rows(&rows)
    }

    fn validate(&self) -> Result<()> {
        let n = self.size;
        for i in 0..n {
            let mut row_seen = vec![false; n];
            let mut col_seen = vec![false; n];
            for j in 0..n {
                let r = self.get(i, j) as usize;
                let c = self.get(j, i) as usize;
                if r >= n || col_seen[c] {
                    return Err(Error::InvalidSquare(format!(
                        "column {} repeats letter {}",
                        i + 1,
                        letter_char(c as u8)
                    )));
                }
                if row_seen[r] {
                    return Err(Error::InvalidSquare(format!(
                        "row {} repeats letter {}",
                        i + 1,
                        letter_char(r as u8)
                    )));
                }
                row_seen[r] = true;
                col_seen[c] = true;
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// 0-based letter at (row, col).
    pub fn get(&self, row: usize, col: usize) -> u8 {
        self.cells[row * self.size + col]
    }

    /// Rows with 1-based numeric entries.
    pub fn rows_numeric(&self) -> Vec<Vec<usize>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j) as usize + 1).collect())
            .collect()
    }

    /// First column reads A, B, C, ...
    pub fn is_normalized(&self) -> bool {
        (0..self.size).all(|i| self.get(i, 0) as usize == i)
    }

    /// Reorders rows so the first column reads A, B, C, ... The rows of a
    /// Latin square have pairwise distinct first letters, so the result is
    /// unique.
    pub fn normalize(&self) -> LatinSquare {
        let n = self.size;
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| self.get(i, 0));
        let mut cells = Vec::with_capacity(n * n);
        for &i in &order {
            cells.extend_from_slice(&self.cells[i * n..(i + 1) * n]);
        }
        LatinSquare { size: n, cells }
    }

    /// The column view of a normalized square: permutation k maps letter x
    /// to the entry at (x, k). Permutation 0 is the identity.
    pub fn as_permutations(&self) -> Result<Vec<Vec<u8>>> {
        if !self.is_normalized() {
            return Err(Error::NotNormalized);
        }
        let n = self.size;
        let perms: Vec<Vec<u8>> = (0..n)
            .map(|k| (0..n).map(|x| self.get(x, k)).collect())
            .collect();
        debug_assert!(perms[0].iter().enumerate().all(|(x, &y)| y as usize == x));
        Ok(perms)
    }

    /// The encoding square: entry (i, j) is the column of `self` where
    /// letter i sits on row j. Always a Latin square again, and applying
    /// the encoding three times returns the original square.
    pub fn encode(&self) -> LatinSquare {
        let n = self.size;
        // Column of each letter per row.
        let mut place = vec![0u8; n * n];
        for j in 0..n {
            for c in 0..n {
                place[j * n + self.get(j, c) as usize] = c as u8;
            }
        }
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(place[j * n + i]);
            }
        }
        let square = LatinSquare { size: n, cells };
        debug_assert!(square.validate().is_ok());
        square
    }

    /// The encoding square as a 1-based integer matrix.
    pub fn encoding_matrix(&self) -> IntMatrix {
        self.encode().numeric_matrix()
    }

    /// The square itself as a 1-based integer matrix.
    pub fn numeric_matrix(&self) -> IntMatrix {
        let entries = self.cells.iter().map(|&c| c as i64 + 1).collect();
        IntMatrix {
            size: self.size,
            entries,
        }
    }

    /// The rotation square: entry (i, j) = i + j mod n. Normalized, and its
    /// numeric matrix has |det| = (n+1) n^(n-1) / 2.
    pub fn cyclic(n: usize) -> Result<LatinSquare> {
        if n < 1 || n > 255 {
            return Err(Error::InvalidSquare(format!(
                "size {n} out of range 1..=255"
            )));
        }
        let mut cells = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                cells.push(((i + j) % n) as u8);
            }
        }
        Ok(LatinSquare { size: n, cells })
    }

    /// Addition table of Z_a x Z_b with element (i, j) numbered b*i + j.
    /// Its numeric matrix is always singular, which makes these the easy
    /// source of singular squares of composite sizes. Arguments may come
    /// in either order.
    pub fn product_group(a: usize, b: usize) -> Result<LatinSquare> {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if a < 2 {
            return Err(Error::InvalidSquare(
                "product group needs both factors >= 2".into(),
            ));
        }
        let n = a * b;
        if n > 255 {
            return Err(Error::InvalidSquare(format!(
                "size {n} out of range 1..=255"
            )));
        }
        let mut cells = Vec::with_capacity(n * n);
        for p in 0..n {
            let (i1, j1) = (p / b, p % b);
            for q in 0..n {
                let (i2, j2) = (q / b, q % b);
                cells.push((((i1 + i2) % a) * b + (j1 + j2) % b) as u8);
            }
        }
        Ok(LatinSquare { size: n, cells })
    }

    /// A singular square of size 7, the smallest odd size where one is
    /// known; no group table of size 7 is singular.
    pub fn seven_singular() -> LatinSquare {
        LatinSquare::from_numeric(&[
            vec![1, 2, 3, 4, 5, 6, 7],
            vec![2, 7, 6, 5, 4, 3, 1],
            vec![3, 6, 7, 2, 1, 4, 5],
            vec![4, 5, 2, 1, 6, 7, 3],
            vec![5, 1, 4, 7, 3, 2, 6],
            vec![6, 4, 1, 3, 7, 5, 2],
            vec![7, 3, 5, 6, 2, 1, 4],
        ])
        .expect("fixture is a latin square")
    }

    /// Uniformly shuffled backtracking fill. Not a uniform distribution
    /// over Latin squares, but cheap, valid, and deterministic per rng.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Result<LatinSquare> {
        if n < 1 || n > 255 {
            return Err(Error::InvalidSquare(format!(
                "size {n} out of range 1..=255"
            )));
        }
        let mut cells = vec![0u8; n * n];
        let mut row_used = vec![false; n * n];
        let mut col_used = vec![false; n * n];
        let filled = fill_cells(n, 0, &mut cells, &mut row_used, &mut col_used, &mut |cands| {
            cands.shuffle(rng)
        });
        debug_assert!(filled, "backtracking always completes a latin square");
        Ok(LatinSquare { size: n, cells })
    }

    /// All Latin squares of size n, lexicographic by rows; optionally only
    /// the normalized ones. Counts grow torrentially, hence the small cap.
    pub fn enumerate_all(n: usize, normalized_only: bool) -> Result<Vec<LatinSquare>> {
        if n < 1 || n > 5 {
            return Err(Error::TooLarge(format!(
                "exhaustive square enumeration is capped at size 5, got {n}"
            )));
        }
        let mut out = Vec::new();
        let mut cells = vec![0u8; n * n];
        let mut row_used = vec![false; n * n];
        let mut col_used = vec![false; n * n];
        enumerate_cells(
            n,
            0,
            normalized_only,
            &mut cells,
            &mut row_used,
            &mut col_used,
            &mut out,
        );
        Ok(out)
    }

    pub fn report(&self) -> SquareReport {
        SquareReport {
            size: self.size,
            rows: self.rows_numeric(),
        }
    }
}

impl fmt::Display for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.size {
            for j in 0..self.size {
                if self.size <= MAX_ALPHABET {
                    write!(f, "{}", letter_char(self.get(i, j)))?;
                } else {
                    if j > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", self.get(i, j) as usize + 1)?;
                }
            }
            if i + 1 < self.size {
                writeln!(f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LatinSquare {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LatinSquare(size={})", self.size)?;
        for i in 0..self.size {
            write!(f, " ")?;
            for j in 0..self.size {
                write!(f, "{}", letter_char(self.get(i, j)))?;
            }
        }
        Ok(())
    }
}

fn candidates(n: usize, pos: usize, row_used: &[bool], col_used: &[bool]) -> Vec<u8> {
    let (r, c) = (pos / n, pos % n);
    (0..n)
        .filter(|&l| !row_used[r * n + l] && !col_used[c * n + l])
        .map(|l| l as u8)
        .collect()
}

fn fill_cells(
    n: usize,
    pos: usize,
    cells: &mut [u8],
    row_used: &mut [bool],
    col_used: &mut [bool],
    order: &mut impl FnMut(&mut Vec<u8>),
) -> bool {
    if pos == n * n {
        return true;
    }
    let (r, c) = (pos / n, pos % n);
    let mut cands = candidates(n, pos, row_used, col_used);
    order(&mut cands);
    for l in cands {
        let li = l as usize;
        cells[pos] = l;
        row_used[r * n + li] = true;
        col_used[c * n + li] = true;
        if fill_cells(n, pos + 1, cells, row_used, col_used, order) {
            return true;
        }
        row_used[r * n + li] = false;
        col_used[c * n + li] = false;
    }
    false
}

fn enumerate_cells(
    n: usize,
    pos: usize,
    normalized_only: bool,
    cells: &mut [u8],
    row_used: &mut [bool],
    col_used: &mut [bool],
    out: &mut Vec<LatinSquare>,
) {
    if pos == n * n {
        out.push(LatinSquare {
            size: n,
            cells: cells.to_vec(),
        });
        return;
    }
    let (r, c) = (pos / n, pos % n);
    for l in candidates(n, pos, row_used, col_used) {
        if normalized_only && c == 0 && l as usize != r {
            continue;
        }
        let li = l as usize;
        cells[pos] = l;
        row_used[r * n + li] = true;
        col_used[c * n + li] = true;
        enumerate_cells(n, pos + 1, normalized_only, cells, row_used, col_used, out);
        row_used[r * n + li] = false;
        col_used[c * n + li] = false;
    }
}

/// Searches for singular squares (numeric table determinant zero):
/// exhaustively over normalized squares for n <= 5, by seeded random
/// sampling (deduplicated through normalization) for larger n. Row
/// permutations only flip the determinant sign, so normalized squares
/// stand in for all of them. `budget` caps the number of squares examined;
/// results come back sorted.
pub fn search_singular(n: usize, budget: usize, seed: u64) -> Result<Vec<LatinSquare>> {
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    if n < 1 || n > 255 {
        return Err(Error::InvalidSquare(format!(
            "size {n} out of range 1..=255"
        )));
    }
    let mut found = BTreeSet::new();
    if n <= 5 {
        for square in LatinSquare::enumerate_all(n, true)? {
            if square.numeric_matrix().det().is_zero() {
                found.insert(square);
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut seen = BTreeSet::new();
        for _ in 0..budget {
            let square = LatinSquare::random(n, &mut rng)?.normalize();
            if !seen.insert(square.clone()) {
                continue;
            }
            if square.numeric_matrix().det().is_zero() {
                found.insert(square);
            }
        }
    }
    Ok(found.into_iter().collect())
}

/// A square integer matrix with exact arithmetic throughout.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    size: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<IntMatrix> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidSquare("empty matrix".into()));
        }
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::InvalidSquare(format!(
                    "row of length {} in a matrix of size {n}",
                    row.len()
                )));
            }
            entries.extend_from_slice(row);
        }
        Ok(IntMatrix { size: n, entries })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.size + col]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        (0..self.size)
            .map(|i| self.entries[i * self.size..(i + 1) * self.size].to_vec())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination. Every
    /// division in the schedule is exact, so no rounding can creep in.
    pub fn det(&self) -> BigInt {
        let n = self.size;
        let mut m: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect();
        let mut negate = false;
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if m[k][k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                    return BigInt::zero();
                };
                m.swap(k, p);
                negate = !negate;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                    debug_assert!((&t % &prev).is_zero());
                    m[i][j] = t / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let d = m[n - 1][n - 1].clone();
        if negate {
            -d
        } else {
            d
        }
    }

    /// A primitive integer vector c with M c = 0, or None when M is
    /// invertible. With nullity above one this is the kernel basis vector
    /// of the first free column in reduced-echelon order. Normalization:
    /// entries have no common factor and the first nonzero one is positive.
    pub fn kernel_vector(&self) -> Option<Vec<BigInt>> {
        let n = self.size;
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| BigInt::from(self.get(i, j))).collect())
            .collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut r = 0;
        for c in 0..n {
            let Some(p) = (r..n).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(r, p);
            for i in r + 1..n {
                if rows[i][c].is_zero() {
                    continue;
                }
                let (a, b) = (rows[r][c].clone(), rows[i][c].clone());
                for j in 0..n {
                    let t = &rows[i][j] * &a - &rows[r][j] * &b;
                    rows[i][j] = t;
                }
                reduce_content(&mut rows[i]);
            }
            pivots.push((r, c));
            r += 1;
            if r == n {
                break;
            }
        }
        if pivots.len() == n {
            return None;
        }
        let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let free = (0..n).find(|c| !pivot_cols.contains(c)).unwrap();

        let mut x = vec![BigRational::zero(); n];
        x[free] = BigRational::one();
        for &(row, col) in pivots.iter().rev() {
            let mut num = BigRational::zero();
            for j in col + 1..n {
                if !rows[row][j].is_zero() && !x[j].is_zero() {
                    num -= BigRational::from(rows[row][j].clone()) * &x[j];
                }
            }
            x[col] = num / BigRational::from(rows[row][col].clone());
        }

        let lcm_den = x
            .iter()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut v: Vec<BigInt> = x
            .iter()
            .map(|q| q.numer() * (&lcm_den / q.denom()))
            .collect();
        let content = v
            .iter()
            .fold(BigInt::zero(), |acc, e| acc.gcd(e));
        if content > BigInt::one() {
            for e in &mut v {
                *e /= &content;
            }
        }
        if v.iter().find(|e| !e.is_zero()).is_some_and(|f| f.is_negative()) {
            for e in &mut v {
                *e = -e.clone();
            }
        }
        debug_assert!((0..n).all(|i| {
            (0..n)
                .map(|j| BigInt::from(self.get(i, j)) * &v[j])
                .sum::<BigInt>()
                .is_zero()
        }));
        Some(v)
    }
}

fn reduce_content(row: &mut [BigInt]) {
    let content = row.iter().fold(BigInt::zero(), |acc, e| acc.gcd(e));
    if content > BigInt::one() {
        for e in row {
            *e /= &content;
        }
    }
}

/// Integer certificate that a square's encoding matrix is singular: the
/// kernel coefficients c sum to zero over the columns, and translating by h
/// turns them into nonnegative letter multiplicities, at least two of which
/// differ. The word with those multiplicities is not 0-regular, yet its
/// expansion under the square is 1-regular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelWitness {
    coefficients: Vec<BigInt>,
    translate: BigInt,
    multiplicities: Vec<BigInt>,
}

impl KernelWitness {
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coefficients
    }

    pub fn translate(&self) -> &BigInt {
        &self.translate
    }

    pub fn multiplicities(&self) -> &[BigInt] {
        &self.multiplicities
    }

    /// The word A^(m_1) B^(m_2) ... with the witness multiplicities. Any
    /// word with these letter counts works; the alphabetical run layout is
    /// the canonical pick.
    pub fn counterexample_word(&self) -> Result<Word> {
        let b = self.multiplicities.len();
        let mut letters = Vec::new();
        for (l, m) in self.multiplicities.iter().enumerate() {
            let count = m.to_usize().ok_or_else(|| {
                Error::TooLarge(format!("multiplicity {m} does not fit a word"))
            })?;
            if letters.len() + count > 1_000_000 {
                return Err(Error::TooLarge("witness word beyond 10^6 letters".into()));
            }
            letters.extend(std::iter::repeat(l as u8).take(count));
        }
        Word::new(b, letters)
    }
}

/// Kernel witness for the encoding matrix of `square`, or None when that
/// matrix is invertible. The translate h is the smallest positive integer
/// making all multiplicities h + c_q nonnegative.
pub fn kernel_witness(square: &LatinSquare) -> Option<KernelWitness> {
    let coefficients = square.encoding_matrix().kernel_vector()?;
    let min = coefficients.iter().min().cloned().unwrap_or_default();
    let h = std::cmp::max(BigInt::one(), -min);
    let multiplicities = coefficients.iter().map(|c| &h + c).collect();
    Some(KernelWitness {
        coefficients,
        translate: h,
        multiplicities,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SquareReport {
    pub size: usize,
    pub rows: Vec<Vec<usize>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(text: &str) -> LatinSquare {
        LatinSquare::parse(text).unwrap()
    }

    fn klein() -> LatinSquare {
        LatinSquare::product_group(2, 2).unwrap()
    }

    #[test]
    fn parse_display_round_trip() {
        let l1 = sq("ABC\nBCA\nCAB");
        assert_eq!(l1.to_string(), "ABC\nBCA\nCAB");
        assert_eq!(l1.size(), 3);
        assert!(l1.is_normalized());
    }

    #[test]
    fn validation_rejects_bad_squares() {
        assert!(LatinSquare::parse("AA\nBB").is_err());
        assert!(LatinSquare::parse("AB\nAB").is_err());
        assert!(LatinSquare::parse("AB\nBAA").is_err());
        assert!(LatinSquare::parse("").is_err());
        assert!(LatinSquare::parse("A1\nBA").is_err());
        assert!(LatinSquare::from_numeric(&[vec![1, 3], vec![3, 1]]).is_err());
    }

    #[test]
    fn cyclic_squares_are_rotations() {
        assert_eq!(LatinSquare::cyclic(2).unwrap(), sq("AB\nBA"));
        assert_eq!(LatinSquare::cyclic(3).unwrap(), sq("ABC\nBCA\nCAB"));
        let c6 = LatinSquare::cyclic(6).unwrap();
        assert!(c6.is_normalized());
        assert_eq!(c6.rows_numeric()[1], vec![2, 3, 4, 5, 6, 1]);
    }

    #[test]
    fn normalize_sorts_rows_by_first_letter() {
        let swapped = sq("BA\nAB");
        assert!(!swapped.is_normalized());
        assert_eq!(swapped.normalize(), sq("AB\nBA"));
        assert_eq!(swapped.normalize().normalize(), swapped.normalize());
    }

    #[test]
    fn permutation_view_of_the_three_cycle() {
        let l1 = sq("ABC\nBCA\nCAB");
        let perms = l1.as_permutations().unwrap();
        assert_eq!(perms[0], vec![0, 1, 2]);
        assert_eq!(perms[1], vec![1, 2, 0]);
        assert_eq!(perms[2], vec![2, 0, 1]);
        assert!(matches!(
            sq("BA\nAB").as_permutations(),
            Err(Error::NotNormalized)
        ));
    }

    #[test]
    fn encoding_fixtures() {
        let l0 = sq("AB\nBA");
        assert_eq!(l0.encoding_matrix().rows(), vec![vec![1, 2], vec![2, 1]]);

        let l1 = sq("ABC\nBCA\nCAB");
        assert_eq!(
            l1.encoding_matrix().rows(),
            vec![vec![1, 3, 2], vec![2, 1, 3], vec![3, 2, 1]]
        );

        // The Klein table is fixed by the encoding.
        assert_eq!(klein().encode(), klein());
    }

    #[test]
    fn encoding_has_order_three() {
        for square in [
            sq("AB\nBA"),
            sq("ABC\nBCA\nCAB"),
            sq("ACB\nBAC\nCBA"),
            klein(),
            LatinSquare::product_group(2, 3).unwrap(),
            LatinSquare::cyclic(5).unwrap(),
            LatinSquare::seven_singular(),
        ] {
            assert_eq!(square.encode().encode().encode(), square);
            assert!(square.encode().validate().is_ok());
        }
    }

    #[test]
    fn klein_table_from_the_product_construction() {
        assert_eq!(
            klein().rows_numeric(),
            vec![
                vec![1, 2, 3, 4],
                vec![2, 1, 4, 3],
                vec![3, 4, 1, 2],
                vec![4, 3, 2, 1],
            ]
        );
    }

    #[test]
    fn z2_x_z3_table() {
        let t = LatinSquare::product_group(2, 3).unwrap();
        assert_eq!(
            t.rows_numeric(),
            vec![
                vec![1, 2, 3, 4, 5, 6],
                vec![2, 3, 1, 5, 6, 4],
                vec![3, 1, 2, 6, 4, 5],
                vec![4, 5, 6, 1, 2, 3],
                vec![5, 6, 4, 2, 3, 1],
                vec![6, 4, 5, 3, 1, 2],
            ]
        );
        // Factor order does not matter.
        assert_eq!(LatinSquare::product_group(3, 2).unwrap(), t);
        assert!(LatinSquare::product_group(1, 4).is_err());
    }

    #[test]
    fn determinant_fixtures() {
        // Rotation tables: |det| = (n+1) n^(n-1) / 2.
        let d2 = LatinSquare::cyclic(2).unwrap().numeric_matrix().det();
        assert_eq!(d2, BigInt::from(-3));
        let d3 = LatinSquare::cyclic(3).unwrap().numeric_matrix().det();
        assert_eq!(d3.abs(), BigInt::from(18));
        let d6 = LatinSquare::cyclic(6).unwrap().numeric_matrix().det();
        assert_eq!(d6.abs(), BigInt::from(27216));

        assert_eq!(klein().numeric_matrix().det(), BigInt::zero());
        let m = IntMatrix::from_rows(&[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(m.det(), BigInt::from(-1));
        let zero_col = IntMatrix::from_rows(&[vec![0, 1], vec![0, 2]]).unwrap();
        assert_eq!(zero_col.det(), BigInt::zero());
    }

    #[test]
    fn kernel_of_simple_singular_matrix() {
        let m = IntMatrix::from_rows(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(m.kernel_vector().unwrap(), vec![BigInt::from(2), BigInt::from(-1)]);
        let id = IntMatrix::from_rows(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert!(id.kernel_vector().is_none());
    }

    #[test]
    fn klein_kernel_witness() {
        let witness = kernel_witness(&klein()).unwrap();
        let expect: Vec<BigInt> = [1, -1, -1, 1].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(witness.coefficients(), &expect[..]);
        assert_eq!(witness.translate(), &BigInt::one());
        let mults: Vec<BigInt> = [2, 0, 0, 2].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(witness.multiplicities(), &mults[..]);
        assert_eq!(witness.counterexample_word().unwrap().to_string(), "AADD");
    }

    #[test]
    fn z2_x_z3_kernel_witness() {
        let witness = kernel_witness(&LatinSquare::product_group(2, 3).unwrap()).unwrap();
        let expect: Vec<BigInt> = [1, -1, 0, -1, 1, 0].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(witness.coefficients(), &expect[..]);
        assert_eq!(witness.counterexample_word().unwrap().to_string(), "AACEEF");
    }

    #[test]
    fn invertible_squares_have_no_witness() {
        assert!(kernel_witness(&sq("ABC\nBCA\nCAB")).is_none());
        assert!(kernel_witness(&sq("AB\nBA")).is_none());
    }

    #[test]
    fn seven_singular_fixture_is_singular() {
        let s = LatinSquare::seven_singular();
        assert!(s.is_normalized());
        assert_eq!(s.numeric_matrix().det(), BigInt::zero());
        // The singular table is the encoding of E(E(s)), so the witness
        // lives two encoding steps away.
        assert!(kernel_witness(&s).is_none());
        assert!(kernel_witness(&s.encode().encode()).is_some());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(LatinSquare::enumerate_all(1, false).unwrap().len(), 1);
        assert_eq!(LatinSquare::enumerate_all(2, false).unwrap().len(), 2);
        assert_eq!(LatinSquare::enumerate_all(2, true).unwrap().len(), 1);
        assert_eq!(LatinSquare::enumerate_all(3, false).unwrap().len(), 12);
        assert_eq!(LatinSquare::enumerate_all(3, true).unwrap().len(), 2);
        assert_eq!(LatinSquare::enumerate_all(4, true).unwrap().len(), 24);
        assert!(LatinSquare::enumerate_all(6, true).is_err());
    }

    #[test]
    fn singular_search_small_sizes() {
        assert!(search_singular(2, 1, 0).unwrap().is_empty());
        assert!(search_singular(3, 1, 0).unwrap().is_empty());
        let fours = search_singular(4, 1, 0).unwrap();
        assert!(fours.contains(&klein()));
        assert!(matches!(search_singular(4, 0, 0), Err(Error::EmptyBudget)));
    }

    #[test]
    fn random_squares_are_valid_and_seeded() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = LatinSquare::random(7, &mut rng).unwrap();
        assert!(a.validate().is_ok());
        let mut rng2 = ChaCha8Rng::seed_from_u64(7);
        let b = LatinSquare::random(7, &mut rng2).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn report_matches_expected_json() {
        let json = serde_json::to_value(sq("AB\nBA").report()).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"size": 2, "rows": [[1, 2], [2, 1]]})
        );
    }
}
