//! Pouring a varying stream into b cups as evenly as possible.
//!
//! A word of length m schedules the pour: interval i of [0,1] (that is,
//! [(i-1)/m, i/m]) goes to the cup named by letter i. Cup j then receives
//! the integral of the density over its block. For an r-regular word the
//! cups differ by at most M / (2^r b (r+1)!) whenever the (r+1)-th
//! derivative of the density stays within M: expanding the density in a
//! Taylor polynomial around each interval midpoint, the polynomial part
//! of degree <= r pours perfectly and only the Lagrange remainder can
//! tilt the cups.
//!
//! Polynomial and exponential densities integrate in closed form so that
//! a zero disparity is really zero; sampled densities interpolate
//! linearly and go through adaptive composite Simpson quadrature with a
//! 1e-10 absolute budget per pouring.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::transform::switch_count;
use crate::word::Word;

/// Total absolute quadrature budget for one pouring, and the slack allowed
/// when asserting disparity against the Taylor bound.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// A density on [0, 1]. Use the constructors: they validate.
#[derive(Clone, Debug)]
pub enum Density {
    /// Coefficients in ascending degree: c0 + c1 x + c2 x^2 + ...
    Polynomial(Vec<f64>),
    /// f(x) = e^(-rate x) with rate > 0.
    Exponential { rate: f64 },
    /// Piecewise-linear interpolation through (x, f(x)) points whose
    /// strictly increasing grid covers [0, 1].
    Sampled { points: Vec<(f64, f64)> },
}

impl Density {
    pub fn polynomial(coefficients: Vec<f64>) -> Result<Density> {
        let d = Density::Polynomial(coefficients);
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(rate: f64) -> Result<Density> {
        let d = Density::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn sampled(points: Vec<(f64, f64)>) -> Result<Density> {
        let d = Density::Sampled { points };
        d.validate()?;
        Ok(d)
    }

    /// Compact text form used on the command line: "poly:1,0,2" lists
    /// ascending coefficients, "exp:1.5" gives the decay rate.
    pub fn parse(text: &str) -> Result<Density> {
        if let Some(list) = text.strip_prefix("poly:") {
            let coefficients = list
                .split(',')
                .map(|c| {
                    c.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Density(format!("bad coefficient {c:?}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            return Density::polynomial(coefficients);
        }
        if let Some(rate) = text.strip_prefix("exp:") {
            let rate = rate
                .trim()
                .parse::<f64>()
                .map_err(|_| Error::Density(format!("bad rate {rate:?}")))?;
            return Density::exponential(rate);
        }
        Err(Error::Density(format!(
            "unrecognized density {text:?}; expected poly:c0,c1,... or exp:rate"
        )))
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Density::Polynomial(coefficients) => {
                if coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Density("coefficients must be finite".into()));
                }
            }
            Density::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return Err(Error::Density(format!(
                        "exponential rate must be positive and finite, got {rate}"
                    )));
                }
            }
            Density::Sampled { points } => {
                if points.len() < 2 {
                    return Err(Error::Density("need at least two sample points".into()));
                }
                if points.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
                    return Err(Error::Density("samples must be finite".into()));
                }
                if points.windows(2).any(|p| p[0].0 >= p[1].0) {
                    return Err(Error::Density(
                        "sample grid must be strictly increasing".into(),
                    ));
                }
                let (first, last) = (points[0].0, points[points.len() - 1].0);
                if first > 0.0 || last < 1.0 {
                    return Err(Error::Density(format!(
                        "sample grid [{first}, {last}] does not cover [0, 1]"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Integral over [lo, hi] within the given absolute tolerance (only
    /// the sampled kind actually needs the tolerance).
    fn integral(&self, lo: f64, hi: f64, tol: f64) -> f64 {
        match self {
            Density::Polynomial(coefficients) => {
                let mut total = 0.0;
                let mut lo_pow = lo;
                let mut hi_pow = hi;
                for (k, c) in coefficients.iter().enumerate() {
                    lo_pow *= if k == 0 { 1.0 } else { lo };
                    hi_pow *= if k == 0 { 1.0 } else { hi };
                    total += c * (hi_pow - lo_pow) / (k as f64 + 1.0);
                }
                total
            }
            Density::Exponential { rate } => ((-rate * lo).exp() - (-rate * hi).exp()) / rate,
            Density::Sampled { points } => {
                // Composite over the grid: split at interior nodes, then
                // adapt. Simpson is exact on each linear piece, so the
                // recursion terminates immediately away from kinks.
                let interp = |x: f64| interpolate(points, x);
                let mut cuts = vec![lo];
                cuts.extend(
                    points
                        .iter()
                        .map(|&(x, _)| x)
                        .filter(|&x| x > lo && x < hi),
                );
                cuts.push(hi);
                let span = hi - lo;
                let mut total = 0.0;
                for pair in cuts.windows(2) {
                    let piece_tol = (tol * (pair[1] - pair[0]) / span).max(f64::MIN_POSITIVE);
                    total += adaptive_simpson(&interp, pair[0], pair[1], piece_tol);
                }
                total
            }
        }
    }

    /// A bound on |f^(order)| over [0, 1], when the kind provides one:
    /// term-by-term for polynomials (zero once the order passes the
    /// degree) and rate^order for exponentials. Sampled densities carry
    /// no derivative information.
    fn derivative_bound(&self, order: u32) -> Option<f64> {
        match self {
            Density::Polynomial(coefficients) => {
                let mut bound = 0.0;
                for (k, c) in coefficients.iter().enumerate() {
                    if (k as u32) < order {
                        continue;
                    }
                    // Falling factorial k (k-1) ... (k-order+1).
                    let mut factor = 1.0;
                    for i in 0..order as usize {
                        factor *= (k - i) as f64;
                    }
                    bound += c.abs() * factor;
                }
                Some(bound)
            }
            Density::Exponential { rate } => Some(rate.powi(order as i32)),
            Density::Sampled { .. } => None,
        }
    }
}

fn interpolate(points: &[(f64, f64)], x: f64) -> f64 {
    let idx = points.partition_point(|&(px, _)| px <= x);
    if idx == 0 {
        return points[0].1;
    }
    if idx == points.len() {
        return points[points.len() - 1].1;
    }
    let (x0, y0) = points[idx - 1];
    let (x1, y1) = points[idx];
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let mid = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(mid), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    adapt(f, a, fa, mid, fm, b, fb, whole, tol, 40)
}

#[allow(clippy::too_many_arguments)]
fn adapt(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    mid: f64,
    fm: f64,
    b: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let lm = 0.5 * (a + mid);
    let rm = 0.5 * (mid + b);
    let (flm, frm) = (f(lm), f(rm));
    let left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    adapt(f, a, fa, lm, flm, mid, fm, left, tol / 2.0, depth - 1)
        + adapt(f, mid, fm, rm, frm, b, fb, right, tol / 2.0, depth - 1)
}

/// Integral of the density over each cup's block of intervals, in letter
/// order. Interval i of the m-fold subdivision of [0, 1] feeds the cup
/// named by letter i of the word.
pub fn cup_amounts(density: &Density, word: &Word) -> Result<Vec<f64>> {
    density.validate()?;
    if word.is_empty() {
        return Err(Error::EmptyPour);
    }
    let m = word.len() as f64;
    let per_interval_tol = QUADRATURE_TOLERANCE / word.len() as f64;
    let mut cups = vec![0.0; word.alphabet_size()];
    for (i, &letter) in word.letters().iter().enumerate() {
        let lo = i as f64 / m;
        let hi = (i + 1) as f64 / m;
        cups[letter as usize] += density.integral(lo, hi, per_interval_tol);
    }
    Ok(cups)
}

/// Largest pairwise difference |c_i - c_j| = max - min.
pub fn disparity(amounts: &[f64]) -> Result<f64> {
    if amounts.is_empty() {
        return Err(Error::Mismatch("disparity needs at least one amount".into()));
    }
    let max = amounts.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = amounts.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(max - min)
}

/// The Lagrange-remainder disparity bound M / (2^r b (r+1)!) for an
/// r-regular pouring into b cups when |f^(r+1)| <= M.
pub fn taylor_bound(derivative_bound: f64, regularity: u32, cups: usize) -> f64 {
    debug_assert!(derivative_bound >= 0.0);
    debug_assert!(cups >= 2);
    let mut factorial = 1.0f64;
    for i in 2..=(regularity as u64 + 1) {
        factorial *= i as f64;
    }
    derivative_bound / (2f64.powi(regularity as i32) * cups as f64 * factorial)
}

/// Everything one pouring yields: the cup integrals, how far apart they
/// are, the guaranteed ceiling on that disparity (absent when the word
/// has regularity -1 or no derivative bound exists), and how many times
/// the pour switches cups.
#[derive(Debug, Clone, Serialize)]
pub struct PouringReport {
    pub cup_amounts: Vec<f64>,
    pub disparity: f64,
    pub bound: Option<f64>,
    pub switches: usize,
}

/// Pours, measures, and certifies: the regularity used for the bound is
/// always recomputed from the word, never taken on faith. An explicit
/// `derivative_bound` overrides the density's own bound and is mandatory
/// for sampled densities. A disparity above the bound (beyond quadrature
/// tolerance) is an error, not a report.
pub fn verify_pouring(
    density: &Density,
    word: &Word,
    derivative_bound: Option<f64>,
) -> Result<PouringReport> {
    let amounts = cup_amounts(density, word)?;
    let spread = disparity(&amounts)?;
    let regularity = word.max_regularity()?;
    let bound = if regularity < 0 {
        None
    } else {
        let order = regularity as u32 + 1;
        let m_bound = match derivative_bound {
            Some(m) => {
                if !(m.is_finite() && m >= 0.0) {
                    return Err(Error::Density(format!(
                        "derivative bound must be finite and nonnegative, got {m}"
                    )));
                }
                m
            }
            None => density
                .derivative_bound(order)
                .ok_or(Error::MissingDerivativeBound)?,
        };
        Some(taylor_bound(m_bound, regularity as u32, word.alphabet_size()))
    };
    if let Some(ceiling) = bound {
        if spread > ceiling + QUADRATURE_TOLERANCE {
            return Err(Error::BoundExceeded {
                disparity: spread,
                bound: ceiling,
            });
        }
    }
    Ok(PouringReport {
        cup_amounts: amounts,
        disparity: spread,
        bound,
        switches: switch_count(word),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::thue_morse;

    fn word(s: &str) -> Word {
        Word::parse(s, None).unwrap()
    }

    /// Exact integral of the piecewise-linear interpolant over [lo, hi]:
    /// the oracle the Simpson path is measured against.
    fn exact_linear_integral(points: &[(f64, f64)], lo: f64, hi: f64) -> f64 {
        let mut cuts = vec![lo];
        cuts.extend(points.iter().map(|&(x, _)| x).filter(|&x| x > lo && x < hi));
        cuts.push(hi);
        cuts.windows(2)
            .map(|p| (p[1] - p[0]) * 0.5 * (interpolate(points, p[0]) + interpolate(points, p[1])))
            .sum()
    }

    #[test]
    fn constant_density_fills_cups_evenly() {
        let ones = Density::polynomial(vec![1.0]).unwrap();
        let cups = cup_amounts(&ones, &word("ABBABAAB")).unwrap();
        assert_eq!(cups.len(), 2);
        for c in &cups {
            assert!((c - 0.5).abs() < 1e-14);
        }
        let thirds = cup_amounts(&ones, &word("ABCCBA")).unwrap();
        for c in &thirds {
            assert!((c - 1.0 / 3.0).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_density_on_the_four_letter_word() {
        let ramp = Density::polynomial(vec![0.0, 1.0]).unwrap();
        let cups = cup_amounts(&ramp, &word("ABBA")).unwrap();
        assert!((cups[0] - 0.25).abs() < 1e-14);
        assert!((cups[1] - 0.25).abs() < 1e-14);
        assert!(disparity(&cups).unwrap() < 1e-14);
    }

    #[test]
    fn quadratic_density_pours_perfectly_with_the_eight_letter_word() {
        let square = Density::polynomial(vec![0.0, 0.0, 1.0]).unwrap();
        let cups = cup_amounts(&square, &word("ABBABAAB")).unwrap();
        for c in &cups {
            assert!((c - 1.0 / 6.0).abs() < 1e-14);
        }
        let report = verify_pouring(&square, &word("ABBABAAB"), None).unwrap();
        assert_eq!(report.bound, Some(0.0));
        assert!(report.disparity < 1e-12);
        assert_eq!(report.switches, 5);
    }

    #[test]
    fn monomial_cups_match_the_power_sum_formula() {
        // For f = x^n, integrating over block B gives
        // sum_{i in B} (i^(n+1) - (i-1)^(n+1)) / ((n+1) m^(n+1)).
        for n in 0..=4u32 {
            let mut coefficients = vec![0.0; n as usize + 1];
            coefficients[n as usize] = 1.0;
            let density = Density::polynomial(coefficients).unwrap();
            for w in [word("ABBABAAB"), word("ABCCBA"), word("ABCBCACAB")] {
                let cups = cup_amounts(&density, &w).unwrap();
                let m = w.len() as f64;
                for (j, block) in w.blocks().iter().enumerate() {
                    let expected: f64 = block
                        .iter()
                        .map(|&i| {
                            let i = i as f64;
                            (i.powi(n as i32 + 1) - (i - 1.0).powi(n as i32 + 1))
                                / ((n as f64 + 1.0) * m.powi(n as i32 + 1))
                        })
                        .sum();
                    assert!(
                        (cups[j] - expected).abs() < 1e-12,
                        "n={n} word={w} cup={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn exponential_pouring_stays_under_the_bound() {
        let decay = Density::exponential(1.0).unwrap();
        let tm8 = thue_morse(8).unwrap();
        let report = verify_pouring(&decay, &tm8, None).unwrap();
        let expected_bound = 1.0 / 48.0;
        assert!((report.bound.unwrap() - expected_bound).abs() < 1e-15);
        assert!(report.disparity > 0.0);
        assert!(report.disparity <= expected_bound);
        let total: f64 = report.cup_amounts.iter().sum();
        assert!((total - (1.0 - (-1.0f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn taylor_bound_fixtures() {
        assert!((taylor_bound(1.0, 2, 2) - 1.0 / 48.0).abs() < 1e-15);
        assert_eq!(taylor_bound(0.0, 5, 3), 0.0);
        // For a fixed unit derivative bound the ceiling keeps falling.
        let mut last = f64::INFINITY;
        for r in 0..=6 {
            let bound = taylor_bound(1.0, r, 2);
            assert!(bound < last);
            last = bound;
        }
    }

    #[test]
    fn sampled_quadrature_matches_the_interpolant_exactly() {
        // Kinked tent samples: Simpson must reproduce the piecewise-linear
        // integral to the advertised tolerance.
        let points: Vec<(f64, f64)> = (0..=10)
            .map(|i| {
                let x = i as f64 / 10.0;
                (x, 1.0 - (x - 0.35).abs())
            })
            .collect();
        let density = Density::sampled(points.clone()).unwrap();
        let tm8 = thue_morse(8).unwrap();
        let cups = cup_amounts(&density, &tm8).unwrap();
        for (j, block) in tm8.blocks().iter().enumerate() {
            let expected: f64 = block
                .iter()
                .map(|&i| exact_linear_integral(&points, (i as f64 - 1.0) / 8.0, i as f64 / 8.0))
                .sum();
            assert!((cups[j] - expected).abs() < QUADRATURE_TOLERANCE);
        }
        let total: f64 = cups.iter().sum();
        let whole = exact_linear_integral(&points, 0.0, 1.0);
        assert!((total - whole).abs() < QUADRATURE_TOLERANCE);
    }

    #[test]
    fn sampled_densities_need_an_explicit_derivative_bound() {
        let flat = Density::sampled(vec![(0.0, 1.0), (1.0, 1.0)]).unwrap();
        let tm8 = thue_morse(8).unwrap();
        assert!(matches!(
            verify_pouring(&flat, &tm8, None),
            Err(Error::MissingDerivativeBound)
        ));
        let report = verify_pouring(&flat, &tm8, Some(1.0)).unwrap();
        assert!((report.bound.unwrap() - 1.0 / 48.0).abs() < 1e-15);
        assert!(report.disparity < 1e-12);
    }

    #[test]
    fn words_without_regularity_get_no_bound() {
        let decay = Density::exponential(2.0).unwrap();
        let lopsided = Word::parse("AAB", None).unwrap();
        let report = verify_pouring(&decay, &lopsided, None).unwrap();
        assert_eq!(report.bound, None);
        assert!(report.disparity > 0.0);
    }

    #[test]
    fn conservation_across_density_kinds() {
        let tm8 = thue_morse(8).unwrap();
        let cases: Vec<(Density, f64)> = vec![
            (
                Density::polynomial(vec![0.3, -1.0, 2.0]).unwrap(),
                0.3 - 0.5 + 2.0 / 3.0,
            ),
            (
                Density::exponential(2.0).unwrap(),
                (1.0 - (-2.0f64).exp()) / 2.0,
            ),
        ];
        for (density, whole) in cases {
            let total: f64 = cup_amounts(&density, &tm8).unwrap().iter().sum();
            assert!((total - whole).abs() < QUADRATURE_TOLERANCE);
        }
    }

    #[test]
    fn cup_amounts_permute_under_relabeling() {
        let density = Density::exponential(1.0).unwrap();
        let mut plain = cup_amounts(&density, &word("ABCCBA")).unwrap();
        let mut renamed = cup_amounts(&density, &word("BACCAB")).unwrap();
        plain.sort_by(f64::total_cmp);
        renamed.sort_by(f64::total_cmp);
        for (a, b) in plain.iter().zip(&renamed) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn validation_rejects_bad_densities() {
        assert!(Density::polynomial(vec![f64::NAN]).is_err());
        assert!(Density::exponential(0.0).is_err());
        assert!(Density::exponential(-1.0).is_err());
        assert!(Density::sampled(vec![(0.0, 1.0)]).is_err());
        assert!(Density::sampled(vec![(0.0, 1.0), (0.0, 2.0)]).is_err());
        assert!(Density::sampled(vec![(0.1, 1.0), (1.0, 1.0)]).is_err());
        assert!(Density::sampled(vec![(0.0, 1.0), (0.9, 1.0)]).is_err());

        let ones = Density::polynomial(vec![1.0]).unwrap();
        let empty = Word::new(2, vec![]).unwrap();
        assert!(matches!(
            cup_amounts(&ones, &empty),
            Err(Error::EmptyPour)
        ));
        assert!(disparity(&[]).is_err());
    }

    #[test]
    fn density_parsing() {
        let poly = Density::parse("poly:1,0,2").unwrap();
        assert!(matches!(poly, Density::Polynomial(ref c) if c == &vec![1.0, 0.0, 2.0]));
        let exp = Density::parse("exp:1.5").unwrap();
        assert!(matches!(exp, Density::Exponential { rate } if rate == 1.5));
        assert!(Density::parse("poly:1,x").is_err());
        assert!(Density::parse("exp:-2").is_err());
        assert!(Density::parse("gauss:1").is_err());
    }
}
