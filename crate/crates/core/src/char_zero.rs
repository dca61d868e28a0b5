//! Characteristic-zero side: multiplier ideals `J(𝔸^{N+1}, 𝔞^λ)` of smooth
//! quadric-generated subvarieties (always a power of `𝔪`), and general
//! combinations `g_1, ..., g_r` of the quadrics with their product `h`.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::poly::Polynomial;
use crate::power::Limits;
use crate::ring::Integers;
use crate::test_ideal::RationalExponent;

/// `k` such that `J(𝔞^λ) = 𝔪^k`, with `k = 0` for the unit ideal:
/// `0` for `λ < (N+1)/2`, else `⌊2λ⌋ − N`. Requires `λ < r`.
pub fn multiplier_ideal_at(n: u32, r: u32, lambda: RationalExponent) -> Result<u32> {
    if lambda >= RationalExponent::integer(r as u64) {
        return Err(Error::OutOfRange(format!("lambda = {lambda} must be below r = {r}")));
    }
    let twice = lambda.floor_times(2);
    if twice < n as u64 + 1 {
        Ok(0)
    } else {
        Ok((twice - n as u64) as u32)
    }
}

/// The half-integers `(N+1)/2, (N+2)/2, ...` below `r`.
pub fn jumping_exponents(n: u32, r: u32) -> Vec<RationalExponent> {
    (n as u64 + 1..2 * r as u64)
        .map(|k| RationalExponent::new(k, 2).expect("nonzero denominator"))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileSegment {
    /// Left end, included.
    pub start: String,
    /// Right end, excluded.
    pub end: String,
    pub exponent: u32,
    #[serde(skip)]
    pub bounds: (RationalExponent, RationalExponent),
}

/// The multiplier ideals on `[0, r)` as half-open intervals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MultiplierProfile {
    pub n: u32,
    pub r: u32,
    pub segments: Vec<ProfileSegment>,
}

pub fn multiplier_profile(n: u32, r: u32) -> Result<MultiplierProfile> {
    if r == 0 {
        return Err(Error::invalid("codimension r must be positive"));
    }
    let mut cuts = vec![RationalExponent::integer(0)];
    cuts.extend(jumping_exponents(n, r));
    cuts.push(RationalExponent::integer(r as u64));
    let segments = cuts
        .windows(2)
        .map(|w| {
            Ok(ProfileSegment {
                start: w[0].to_string(),
                end: w[1].to_string(),
                exponent: multiplier_ideal_at(n, r, w[0])?,
                bounds: (w[0], w[1]),
            })
        })
        .collect::<Result<_>>()?;
    Ok(MultiplierProfile { n, r, segments })
}

impl MultiplierProfile {
    /// Two-column text table: interval, ideal.
    pub fn to_table(&self) -> String {
        let mut out = format!("N = {}, r = {}\n{:<16} ideal\n", self.n, self.r, "lambda");
        for s in &self.segments {
            let ideal = match s.exponent {
                0 => "R".to_string(),
                1 => "m".to_string(),
                k => format!("m^{k}"),
            };
            out.push_str(&format!("{:<16} {ideal}\n", format!("[{}, {})", s.start, s.end)));
        }
        out
    }
}

/// Prediction for `τ(h_p^μ)` with `h` of degree `2r`: the multiplier ideal
/// at `λ = rμ`. Requires `μ < 1`.
pub fn predicted_test_ideal(n: u32, r: u32, mu: RationalExponent) -> Result<u32> {
    if mu >= RationalExponent::integer(1) {
        return Err(Error::OutOfRange(format!("mu = {mu} must be below 1")));
    }
    multiplier_ideal_at(n, r, mu.mul_int(r as u64))
}

/// The prediction on `(1 − 1/(2r), 1)`, where it is constant: `𝔪^{2r−N−1}`
/// or `R`.
pub fn predicted_exponent_below_one(n: u32, r: u32) -> Result<u32> {
    let mu = RationalExponent::new(4 * r as u64 - 1, 4 * r as u64)?;
    predicted_test_ideal(n, r, mu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralCombinationConfig {
    pub seed: u64,
    /// Coefficients are drawn from `[−B, B] \ {0}`.
    pub coefficient_bound: u64,
    pub max_retries: u32,
}

impl Default for GeneralCombinationConfig {
    fn default() -> Self {
        GeneralCombinationConfig {
            seed: 1,
            coefficient_bound: 5,
            max_retries: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralProduct {
    /// `g_i = Σ_j c_ij f_j`, divided by their content.
    pub combinations: Vec<Polynomial<Integers>>,
    pub coefficients: Vec<Vec<i64>>,
    /// `h = Π g_i`, primitive of degree `2r`.
    pub h: Polynomial<Integers>,
    /// Draws used, counting the successful one.
    pub attempts: u32,
    pub warnings: Vec<String>,
}

/// Projective dimension of `V(gs)` over ℚ for a complete intersection of
/// `r` quadrics, read from Hilbert values past the regularity.
///
/// A dimension of `N − r` over a large prime field already forces the same
/// over ℚ: fibre dimension only jumps up under specialization, and `r`
/// forms cut out codimension at most `r`.
pub fn ci_dimension(gs: &Ideal<Integers>, r: u32, limits: &Limits) -> Result<i64> {
    let n = gs.nvars() as u32 - 1;
    let expected = n.saturating_sub(r);
    let start = r.max((2 * r).saturating_sub(n));
    gs.rational_dimension_estimate(start..=start + expected + 2, limits)
}

/// Seeded general combinations of quadrics with a pure-codimension check.
pub fn general_product(
    fs: &[Polynomial<Integers>],
    r: u32,
    cfg: &GeneralCombinationConfig,
    limits: &Limits,
) -> Result<GeneralProduct> {
    let first = fs.first().ok_or_else(|| Error::invalid("no generators"))?;
    let nvars = first.nvars();
    for f in fs {
        if f.nvars() != nvars {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: f.nvars(),
            });
        }
        if f.homogeneous_degree() != Some(2) {
            return Err(Error::invalid(format!("{f} is not a quadratic form")));
        }
    }
    if r == 0 || r as usize > nvars {
        return Err(Error::invalid(format!("codimension {r} out of range for {nvars} variables")));
    }
    if cfg.coefficient_bound == 0 || cfg.coefficient_bound > i64::MAX as u64 {
        return Err(Error::invalid("coefficient bound must be positive"));
    }
    let n = nvars as i64 - 1;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let bound = cfg.coefficient_bound as i64;
    let mut last_reason = String::new();
    for attempt in 1..=cfg.max_retries + 1 {
        let coefficients: Vec<Vec<i64>> = (0..r)
            .map(|_| {
                fs.iter()
                    .map(|_| {
                        let v = rng.gen_range(1..=bound);
                        if rng.gen_bool(0.5) {
                            -v
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        let mut gs = Vec::with_capacity(r as usize);
        for row in &coefficients {
            let mut g = Polynomial::zero(Integers, nvars);
            for (c, f) in row.iter().zip(fs) {
                g = g.add(&f.scale(&BigInt::from(*c)))?;
            }
            gs.push(g.primitive_part());
        }
        if gs.iter().any(Polynomial::is_zero) {
            last_reason = "a combination vanished".into();
            continue;
        }
        let ideal = Ideal::new(Integers, nvars, gs.clone())?;
        match ci_dimension(&ideal, r, limits) {
            Ok(d) if d == n - r as i64 => {}
            Ok(d) => {
                last_reason = format!("V(g) has dimension {d}, expected {}", n - r as i64);
                continue;
            }
            Err(Error::InconclusiveWindow(msg)) => {
                last_reason = msg;
                continue;
            }
            Err(e) => return Err(e),
        }
        let h = Polynomial::product(Integers, nvars, &gs)?.primitive_part();
        let mut warnings = Vec::new();
        if (2 * r as i64) < n + 1 {
            warnings.push(format!("deg h = {} is below N + 1 = {}", 2 * r, n + 1));
        }
        return Ok(GeneralProduct {
            combinations: gs,
            coefficients,
            h,
            attempts: attempt,
            warnings,
        });
    }
    Err(Error::Genericity {
        seed: cfg.seed,
        attempts: cfg.max_retries as usize + 1,
        reason: last_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(s: &str) -> RationalExponent {
        s.parse().unwrap()
    }

    fn zpoly(s: &str, n: usize) -> Polynomial<Integers> {
        Polynomial::parse(Integers, s, Some(n)).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(multiplier_ideal_at(3, 3, lam("3/2")).unwrap(), 0);
        assert_eq!(multiplier_ideal_at(3, 3, lam("2")).unwrap(), 1);
        assert_eq!(multiplier_ideal_at(4, 3, lam("5/2")).unwrap(), 1);
        assert!(matches!(multiplier_ideal_at(3, 3, lam("3")), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn jumps() {
        assert_eq!(jumping_exponents(3, 3), vec![lam("2"), lam("5/2")]);
        assert_eq!(jumping_exponents(2, 3), vec![lam("3/2"), lam("2"), lam("5/2")]);
        assert!(jumping_exponents(9, 3).is_empty());
    }

    #[test]
    fn profile_partitions_the_range() {
        let p = multiplier_profile(3, 3).unwrap();
        let shape: Vec<_> = p.segments.iter().map(|s| (s.start.as_str(), s.end.as_str(), s.exponent)).collect();
        assert_eq!(shape, vec![("0", "2", 0), ("2", "5/2", 1), ("5/2", "3", 2)]);
        let constant = multiplier_profile(9, 3).unwrap();
        assert_eq!(constant.segments.len(), 1);
        assert!(p.to_table().contains("[2, 5/2)"));
    }

    #[test]
    fn predictions_below_one() {
        assert_eq!(predicted_exponent_below_one(3, 2).unwrap(), 0);
        assert_eq!(predicted_exponent_below_one(5, 3).unwrap(), 0);
        assert_eq!(predicted_exponent_below_one(4, 3).unwrap(), 1);
        assert!(predicted_test_ideal(4, 3, lam("1")).is_err());
    }

    #[test]
    fn quartic_pencil() {
        let fs = [zpoly("x1^2 - x0x2", 4), zpoly("x3^2 - x1x2 - x0x1", 4)];
        let cfg = GeneralCombinationConfig::default();
        let out = general_product(&fs, 2, &cfg, &Limits::default()).unwrap();
        assert_eq!(out.h.total_degree(), Some(4));
        assert_eq!(out.h.content(), BigInt::from(1));
        let ideal = Ideal::new(Integers, 4, out.combinations.clone()).unwrap();
        assert_eq!(ci_dimension(&ideal, 2, &Limits::default()).unwrap(), 1);
        let again = general_product(&fs, 2, &cfg, &Limits::default()).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn single_quadric() {
        let q = zpoly("x0^2 + x1x2", 3);
        let out = general_product(std::slice::from_ref(&q), 1, &GeneralCombinationConfig::default(), &Limits::default())
            .unwrap();
        assert!(out.h == q || out.h == q.neg());
    }

    #[test]
    fn degenerate_input_exhausts_retries() {
        let fs = [zpoly("x0^2", 3), zpoly("x0x1", 3)];
        let cfg = GeneralCombinationConfig {
            seed: 7,
            coefficient_bound: 2,
            max_retries: 3,
        };
        match general_product(&fs, 2, &cfg, &Limits::default()) {
            Err(Error::Genericity { seed: 7, attempts: 4, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn retry_recovers_from_a_bad_draw() {
        // With ±1 coefficients two combinations of three conics coincide up
        // to sign a quarter of the time.
        let fs = [zpoly("x0^2", 2), zpoly("x1^2", 2), zpoly("x0x1", 2)];
        let lim = Limits::default();
        let retried = (0..200u64).find_map(|seed| {
            let cfg = GeneralCombinationConfig {
                seed,
                coefficient_bound: 1,
                max_retries: 8,
            };
            general_product(&fs, 2, &cfg, &lim).ok().filter(|g| g.attempts > 1)
        });
        assert!(retried.is_some());
    }
}
