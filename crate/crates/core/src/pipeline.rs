//! Per-prime scans of an integer model: good-prime filtering, the
//! containment A, bijectivity B on `V(h)` and C on `Y = V(g_1..g_r)`, and
//! a point-counting oracle for genus-one fixtures.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::char_zero::predicted_test_ideal;
use crate::cohomology::{frobenius_matrix, hasse_witt_matrix, FrobeniusMatrix};
use crate::error::{Error, Result};
use crate::ideal::Ideal;
use crate::model::IntegerModel;
use crate::poly::Polynomial;
use crate::power::Limits;
use crate::ring::{is_prime, PrimeField};
use crate::test_ideal::{
    containment_power_check, fedder_root_through_degree, test_ideal, ChainStatus, RationalExponent,
    TestIdealOptions,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeVerdict {
    pub good: bool,
    pub reason: Option<String>,
}

impl PrimeVerdict {
    fn bad(reason: String) -> Self {
        PrimeVerdict {
            good: false,
            reason: Some(reason),
        }
    }
}

fn degenerates(g: &Polynomial<crate::ring::Integers>, field: PrimeField) -> bool {
    let r = g.reduce_mod_p(field);
    r.is_zero() || r.total_degree() != g.total_degree()
}

/// The reduction loses a monomial of `g`.
fn loses_support(g: &Polynomial<crate::ring::Integers>, field: PrimeField) -> bool {
    g.reduce_mod_p(field).len() != g.len()
}

/// A model generator losing a monomial mod `p`, a combination or `h`
/// dropping degree, or a Hilbert function that differs from the one over ℚ,
/// makes `p` bad.
pub fn good_prime(model: &IntegerModel, p: u64) -> Result<PrimeVerdict> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if model.excluded_primes.contains(&p) {
        return Ok(PrimeVerdict::bad("excluded".into()));
    }
    let field = PrimeField::new(p)?;
    for g in model.ideal.generators() {
        if loses_support(g, field) {
            return Ok(PrimeVerdict::bad(format!("generator {g} degenerates")));
        }
    }
    for g in &model.product.combinations {
        if degenerates(g, field) {
            return Ok(PrimeVerdict::bad(format!("combination {g} degenerates")));
        }
    }
    if degenerates(&model.product.h, field) {
        return Ok(PrimeVerdict::bad("h degenerates".into()));
    }
    let top = IntegerModel::HILBERT_DEGREE;
    let hf = model.ideal.reduce_mod_p(field).hilbert_function(top)?;
    if hf != model.hilbert_ideal {
        return Ok(PrimeVerdict::bad(format!(
            "Hilbert function {hf:?} differs from {:?}",
            model.hilbert_ideal
        )));
    }
    let combos = Ideal::new(field, model.nvars(), model.product.combinations.iter().map(|g| g.reduce_mod_p(field)))?;
    let hf = combos.hilbert_function(top)?;
    if hf != model.hilbert_combinations {
        return Ok(PrimeVerdict::bad(format!(
            "Hilbert function of the combinations {hf:?} differs from {:?}",
            model.hilbert_combinations
        )));
    }
    Ok(PrimeVerdict {
        good: true,
        reason: None,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PointCount {
    pub p: u64,
    pub count: u64,
    /// `p + 1 − count`.
    pub a_p: i64,
}

impl PointCount {
    /// A genus-one reduction is ordinary iff `a_p ≢ 0 (mod p)`.
    pub fn ordinary(&self) -> bool {
        self.a_p.rem_euclid(self.p as i64) != 0
    }
}

pub const POINT_COUNT_MAX_PRIME: u64 = 10_000;
const POINT_COUNT_MAX_POINTS: u128 = 1 << 31;

/// Exhaustive count of the common projective zeros of `forms` over 𝔽_p.
pub fn point_count(forms: &[Polynomial<PrimeField>]) -> Result<PointCount> {
    let first = forms.first().ok_or_else(|| Error::invalid("no forms to count"))?;
    let field = *first.ring();
    let p = field.p();
    let nvars = first.nvars();
    if p < 5 {
        return Err(Error::Precondition(format!("point counting needs p >= 5, got {p}")));
    }
    if p > POINT_COUNT_MAX_PRIME {
        return Err(Error::resource(format!("point counting is capped at p <= {POINT_COUNT_MAX_PRIME}")));
    }
    if forms.iter().any(|f| f.nvars() != nvars || *f.ring() != field) {
        return Err(Error::MixedDomain("forms over different rings".into()));
    }
    let total: u128 = (0..nvars as u32).map(|k| (p as u128).pow(k)).sum();
    if total > POINT_COUNT_MAX_POINTS {
        return Err(Error::resource(format!("{total} projective points to enumerate")));
    }
    let mut count = 0u64;
    let mut point = vec![0u64; nvars];
    // Points normalized so that the first nonzero coordinate is 1.
    for lead in 0..nvars {
        point.iter_mut().for_each(|x| *x = 0);
        point[lead] = 1;
        let free = nvars - lead - 1;
        let n = (p as u128).pow(free as u32) as u64;
        for idx in 0..n {
            let mut k = idx;
            for slot in point[lead + 1..].iter_mut() {
                *slot = k % p;
                k /= p;
            }
            if forms.iter().all(|f| f.eval(&point) == 0) {
                count += 1;
            }
        }
    }
    Ok(PointCount {
        p,
        count,
        a_p: p as i64 + 1 - count as i64,
    })
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StageTiming {
    pub good_prime_ms: f64,
    pub a_ms: f64,
    pub b_ms: f64,
    pub c_ms: f64,
    pub pts_ms: f64,
}

/// Result of comparing `τ(h_p^μ)` with the predicted power of `𝔪`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MuReport {
    pub mu: String,
    pub predicted_exponent: u32,
    pub stabilized: bool,
    pub stabilized_at: u32,
    pub matches_prediction: bool,
    pub inclusions_checked: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PrimeReport {
    pub p: u64,
    pub good: bool,
    pub reason: Option<String>,
    #[serde(rename = "A")]
    pub a: Option<bool>,
    #[serde(rename = "B")]
    pub b: Option<bool>,
    #[serde(rename = "C_Y")]
    pub c_y: Option<bool>,
    #[serde(rename = "C_pts")]
    pub c_pts: Option<bool>,
    pub a_p: Option<i64>,
    pub implication_ok: bool,
    /// Stage that hit a resource cap, if any.
    pub partial: Option<String>,
    pub mu: Option<MuReport>,
    pub timing: Option<StageTiming>,
}

/// `(¬A ∨ B) ∧ (¬B ∨ C_Y)`, with unknown values never failing.
pub fn implication_holds(a: Option<bool>, b: Option<bool>, c_y: Option<bool>) -> bool {
    let a_b = !(a == Some(true) && b == Some(false));
    let b_c = !(b == Some(true) && c_y == Some(false));
    a_b && b_c
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub jobs: usize,
    /// Also compare `τ(h^μ)` with the prediction at this `μ < 1`.
    pub mu: Option<RationalExponent>,
    pub timing: bool,
    pub limits: Limits,
    pub e_max: u32,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            jobs: 1,
            mu: None,
            timing: false,
            limits: Limits::default(),
            e_max: 3,
        }
    }
}

fn ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs a stage, turning a resource cap into `None` plus a note.
fn stage<T>(name: &str, partial: &mut Option<String>, f: impl FnOnce() -> Result<T>) -> Result<Option<T>> {
    match f() {
        Ok(v) => Ok(Some(v)),
        Err(e) if e.is_resource_limit() => {
            if partial.is_none() {
                *partial = Some(format!("{name}: {e}"));
            }
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

fn matrix_text(m: &Option<FrobeniusMatrix>) -> String {
    match m {
        Some(m) => format!("{:?} (det {})", m.matrix, m.determinant),
        None => "not computed".into(),
    }
}

/// The full analysis at one prime.
pub fn analyze_prime(model: &IntegerModel, p: u64, opts: &ScanOptions) -> Result<PrimeReport> {
    let t0 = Instant::now();
    let verdict = good_prime(model, p)?;
    let mut timing = StageTiming {
        good_prime_ms: ms(t0),
        ..StageTiming::default()
    };
    let mut report = PrimeReport {
        p,
        good: verdict.good,
        reason: verdict.reason,
        a: None,
        b: None,
        c_y: None,
        c_pts: None,
        a_p: None,
        implication_ok: true,
        partial: None,
        mu: None,
        timing: None,
    };
    if !report.good {
        report.timing = opts.timing.then_some(timing);
        return Ok(report);
    }
    let field = PrimeField::new(p)?;
    let lim = &opts.limits;
    let gs: Vec<_> = model.product.combinations.iter().map(|g| g.reduce_mod_p(field)).collect();
    let h = model.product.h.reduce_mod_p(field);
    let k = model.containment_exponent();
    let mut partial = None;

    let t = Instant::now();
    report.a = stage("A", &mut partial, || {
        containment_power_check(k, &fedder_root_through_degree(&h, k, lim)?)
    })?;
    timing.a_ms = ms(t);

    let t = Instant::now();
    let b_matrix = stage("B", &mut partial, || hasse_witt_matrix(&h, lim))?;
    report.b = b_matrix.as_ref().map(|m| m.bijective);
    timing.b_ms = ms(t);

    let t = Instant::now();
    let c_matrix = stage("C_Y", &mut partial, || frobenius_matrix(&gs, lim))?;
    report.c_y = c_matrix.as_ref().map(|m| m.bijective);
    timing.c_ms = ms(t);

    let t = Instant::now();
    if let Some(cubic) = &model.oracle {
        if p >= 5 {
            let count = stage("C_pts", &mut partial, || point_count(&[cubic.reduce_mod_p(field)]))?;
            report.a_p = count.map(|c| c.a_p);
            report.c_pts = count.map(|c| c.ordinary());
        }
    }
    timing.pts_ms = ms(t);

    if let Some(mu) = opts.mu {
        let predicted = predicted_test_ideal(model.ambient_dim, model.codim, mu)?;
        let topts = TestIdealOptions {
            e_max: opts.e_max,
            limits: lim.clone(),
            ..TestIdealOptions::default()
        };
        report.mu = stage("mu", &mut partial, || {
            let tau = test_ideal(&Ideal::principal(h.clone()), mu, &topts)?;
            let target = Ideal::maximal_power(field, model.nvars(), predicted);
            Ok(MuReport {
                mu: mu.to_string(),
                predicted_exponent: predicted,
                stabilized: tau.status == ChainStatus::Stabilized,
                stabilized_at: tau.stabilized_at,
                matches_prediction: tau.ideal.equals(&target)?,
                inclusions_checked: tau.inclusions_checked,
            })
        })?;
    }

    report.implication_ok = implication_holds(report.a, report.b, report.c_y);
    report.partial = partial;
    report.timing = opts.timing.then_some(timing);
    if !report.implication_ok {
        let mut dump = String::new();
        let _ = writeln!(dump, "prime p = {p}");
        let _ = writeln!(dump, "model generators: {}", model.ideal);
        let _ = writeln!(dump, "seed {} bound {}", model.config.seed, model.config.coefficient_bound);
        for (i, g) in gs.iter().enumerate() {
            let _ = writeln!(dump, "g{} mod p = {g}", i + 1);
        }
        let _ = writeln!(dump, "h mod p = {h}");
        let _ = writeln!(dump, "A = {:?}, B = {:?}, C_Y = {:?}", report.a, report.b, report.c_y);
        let _ = writeln!(dump, "B matrix: {}", matrix_text(&b_matrix));
        let _ = writeln!(dump, "C_Y matrix: {}", matrix_text(&c_matrix));
        return Err(Error::TheoremViolation(dump));
    }
    Ok(report)
}

/// Reports for every non-excluded prime `<= prime_bound`, in prime order.
pub fn scan(model: &IntegerModel, prime_bound: u64, opts: &ScanOptions) -> Result<Vec<PrimeReport>> {
    let primes: Vec<u64> = crate::ring::primes_in(2, prime_bound)
        .into_iter()
        .filter(|p| !model.excluded_primes.contains(p))
        .collect();
    let results: Vec<Result<PrimeReport>> = if opts.jobs <= 1 {
        primes.iter().map(|&p| analyze_prime(model, p, opts)).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(opts.jobs)
            .build()
            .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
        pool.install(|| primes.par_iter().map(|&p| analyze_prime(model, p, opts)).collect())
    };
    if let Some(v) = results.iter().find_map(|r| match r {
        Err(e @ Error::TheoremViolation(_)) => Some(e.clone()),
        _ => None,
    }) {
        return Err(v);
    }
    results.into_iter().collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Table,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "table" => Ok(ReportFormat::Table),
            other => Err(Error::invalid(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanSummary {
    pub primes: usize,
    pub good: usize,
    #[serde(rename = "A_true")]
    pub a_true: usize,
    #[serde(rename = "B_true")]
    pub b_true: usize,
    #[serde(rename = "C_Y_true")]
    pub c_y_true: usize,
    #[serde(rename = "C_pts_true")]
    pub c_pts_true: usize,
    pub implication_failures: usize,
    /// Fraction of good primes with A true, as `k/n`.
    #[serde(rename = "A_density")]
    pub a_density: String,
}

pub fn summarize(reports: &[PrimeReport]) -> ScanSummary {
    let good: Vec<_> = reports.iter().filter(|r| r.good).collect();
    let count = |f: fn(&PrimeReport) -> Option<bool>| good.iter().filter(|r| f(r) == Some(true)).count();
    let a_true = count(|r| r.a);
    ScanSummary {
        primes: reports.len(),
        good: good.len(),
        a_true,
        b_true: count(|r| r.b),
        c_y_true: count(|r| r.c_y),
        c_pts_true: count(|r| r.c_pts),
        implication_failures: reports.iter().filter(|r| !r.implication_ok).count(),
        a_density: format!("{a_true}/{}", good.len()),
    }
}

#[derive(Serialize)]
struct JsonReport<'a> {
    reports: &'a [PrimeReport],
    summary: ScanSummary,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    p: u64,
    good: bool,
    reason: Option<&'a str>,
    #[serde(rename = "A")]
    a: Option<bool>,
    #[serde(rename = "B")]
    b: Option<bool>,
    #[serde(rename = "C_Y")]
    c_y: Option<bool>,
    #[serde(rename = "C_pts")]
    c_pts: Option<bool>,
    a_p: Option<i64>,
    implication_ok: bool,
    partial: Option<&'a str>,
}

const CSV_HEADER: &str = "p,good,reason,A,B,C_Y,C_pts,a_p,implication_ok,partial\n";

fn flag(v: Option<bool>) -> &'static str {
    match v {
        Some(true) => "yes",
        Some(false) => "no",
        None => "-",
    }
}

/// Deterministic text for a list of reports.
pub fn emit_report(reports: &[PrimeReport], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let doc = JsonReport {
                reports,
                summary: summarize(reports),
            };
            serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
        }
        ReportFormat::Csv => {
            if reports.is_empty() {
                return CSV_HEADER.to_string();
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in reports {
                w.serialize(CsvRow {
                    p: r.p,
                    good: r.good,
                    reason: r.reason.as_deref(),
                    a: r.a,
                    b: r.b,
                    c_y: r.c_y,
                    c_pts: r.c_pts,
                    a_p: r.a_p,
                    implication_ok: r.implication_ok,
                    partial: r.partial.as_deref(),
                })
                .expect("csv row");
            }
            String::from_utf8(w.into_inner().expect("csv flush")).expect("utf-8")
        }
        ReportFormat::Table => {
            let mut out = format!(
                "{:>5}  {:<4}  {:<3}  {:<3}  {:<3}  {:<5}  {:>5}  {:<4}  note\n",
                "p", "good", "A", "B", "C_Y", "C_pts", "a_p", "ok"
            );
            for r in reports {
                let note = if !r.good {
                    r.reason.clone().unwrap_or_default()
                } else {
                    let mut n = match r.c_y {
                        Some(true) => "ordinary".to_string(),
                        Some(false) => "supersingular".to_string(),
                        None => String::new(),
                    };
                    if let Some(part) = &r.partial {
                        n.push_str(&format!(" (partial: {part})"));
                    }
                    n
                };
                let a_p = r.a_p.map_or("-".to_string(), |v| v.to_string());
                let _ = writeln!(
                    out,
                    "{:>5}  {:<4}  {:<3}  {:<3}  {:<3}  {:<5}  {:>5}  {:<4}  {}",
                    r.p,
                    flag(Some(r.good)),
                    flag(r.a),
                    flag(r.b),
                    flag(r.c_y),
                    flag(r.c_pts),
                    a_p,
                    flag(Some(r.implication_ok)),
                    note.trim()
                );
            }
            let s = summarize(reports);
            let _ = writeln!(
                out,
                "\nprimes {}  good {}  A {}  B {}  C_Y {}  C_pts {}  implication failures {}",
                s.primes, s.good, s.a_true, s.b_true, s.c_y_true, s.c_pts_true, s.implication_failures
            );
            let _ = writeln!(out, "good primes with A true: {}", s.a_density);
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char_zero::GeneralCombinationConfig;
    use crate::model::{parse_model, parse_model_file, IntegerModel};

    fn fp(p: u64, s: &str, n: usize) -> Polynomial<PrimeField> {
        Polynomial::parse(PrimeField::new(p).unwrap(), s, Some(n)).unwrap()
    }

    #[test]
    fn counts_on_the_cubic() {
        let c = point_count(&[fp(7, "x1^2x2 - x0^3 + x0x2^2", 3)]).unwrap();
        assert_eq!(c.a_p, 0);
        assert!(!c.ordinary());
        let c = point_count(&[fp(5, "x1^2x2 - x0^3 + x0x2^2", 3)]).unwrap();
        assert_ne!(c.a_p.rem_euclid(5), 0);
        let quartic = [fp(5, "x1^2 - x0x2", 4), fp(5, "x3^2 - x1x2 + x0x1", 4)];
        assert_eq!(point_count(&quartic).unwrap().count, c.count);
        assert!(point_count(&[fp(3, "x0", 3)]).is_err());
        assert!(matches!(point_count(&[fp(10007, "x0", 3)]), Err(Error::ResourceLimit(_))));
    }

    #[test]
    fn degenerate_generator_is_bad() {
        let text = "vars: x0 x1 x2 x3\nn: 1\ngen: 2x0x1 - x2^2\ngen: x3^2 - x1x2\n";
        let m = parse_model(text).unwrap();
        let v = good_prime(&m, 2).unwrap();
        assert!(!v.good);
        assert!(v.reason.unwrap().contains("degenerates"));
    }

    #[test]
    fn excluded_prime_is_bad_and_skipped() {
        let text = "vars: x0 x1 x2 x3\nn: 1\ngen: x1^2 - x0x2\ngen: x3^2 - x1x2 + x0x1\nexclude: 2 3 5 7\n";
        let m = parse_model(text).unwrap();
        assert_eq!(good_prime(&m, 3).unwrap().reason.as_deref(), Some("excluded"));
        assert!(scan(&m, 7, &ScanOptions::default()).unwrap().is_empty());
    }

    #[test]
    fn empty_csv_is_a_header() {
        assert_eq!(emit_report(&[], ReportFormat::Csv), CSV_HEADER);
        let one = PrimeReport {
            p: 5,
            good: true,
            reason: None,
            a: Some(true),
            b: Some(true),
            c_y: Some(true),
            c_pts: None,
            a_p: None,
            implication_ok: true,
            partial: None,
            mu: None,
            timing: None,
        };
        let csv = emit_report(std::slice::from_ref(&one), ReportFormat::Csv);
        assert_eq!(csv.lines().next().unwrap().to_string() + "\n", CSV_HEADER);
        let json: serde_json::Value = serde_json::from_str(&emit_report(&[one], ReportFormat::Json)).unwrap();
        let obj = json["reports"][0].as_object().unwrap();
        for key in ["p", "good", "A", "B", "C_Y", "C_pts", "implication_ok", "timing"] {
            assert!(obj.contains_key(key), "{key}");
        }
        assert_eq!(json["summary"]["A_density"], "1/1");
    }

    #[test]
    fn implication_truth_table() {
        assert!(implication_holds(Some(false), Some(false), Some(false)));
        assert!(!implication_holds(Some(true), Some(false), Some(true)));
        assert!(!implication_holds(Some(true), Some(true), Some(false)));
        assert!(implication_holds(Some(true), None, Some(false)));
    }

    #[test]
    fn seed_override() {
        let text = "vars: x0 x1 x2 x3\nn: 1\ngen: x1^2 - x0x2\ngen: x3^2 - x1x2 + x0x1\nseed: 9\n";
        let file = parse_model_file(text).unwrap();
        let cfg = GeneralCombinationConfig {
            seed: 4,
            ..GeneralCombinationConfig::default()
        };
        let m = IntegerModel::build(file, cfg, false, &Limits::default()).unwrap();
        assert_eq!(m.config.seed, 4);
    }
}
