//! JSON reports and CSV tables produced by the command-line tool.
//!
//! Every numeric result is tagged `exact` (an integer or `p/q` string) or
//! `float` (with the tolerance it was computed to). Reports contain no
//! timestamps, so fixed inputs and seeds give byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::bounds::asymptotic::{self, AsymptoticPoint};
use crate::bounds::expander::expander_lower_bound;
use crate::bounds::finite::{self, KqOracle};
use crate::ensembles::{
    sample_double, sample_expander_code, sample_single, EnsembleKind, EnsembleSpec, ExpanderSample, MAX_RETRIES,
};
use crate::error::{Error, Result};
use crate::io::CodeFile;
use crate::locality::{best_closure_search, distance_certificate, locality_profile, RecoveryGraph};
use crate::matrix::Matrix;
use crate::par;

/// Exact rationals serialize as "p/q" strings (or "p" for integers).
pub fn ratio_string(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub(crate) fn ser_ratio<S: Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(x))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Number {
    Exact { value: String },
    Float { value: f64, tolerance: f64 },
}

impl Number {
    pub fn exact(v: impl ToString) -> Number {
        Number::Exact { value: v.to_string() }
    }

    pub fn float(value: f64, tolerance: f64) -> Number {
        Number::Float { value, tolerance }
    }

    /// The value as a float, for display and comparisons.
    pub fn as_f64(&self) -> f64 {
        match self {
            Number::Float { value, .. } => *value,
            Number::Exact { value } => match value.split_once('/') {
                Some((a, b)) => a.parse::<f64>().unwrap_or(f64::NAN) / b.parse::<f64>().unwrap_or(f64::NAN),
                None => value.parse().unwrap_or(f64::NAN),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Entry {
    pub name: String,
    #[serde(flatten)]
    pub value: Number,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub version: &'static str,
    pub seed: Option<u64>,
    pub rng: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub params: BTreeMap<String, Value>,
    pub results: Vec<Entry>,
    pub details: Value,
    pub provenance: Provenance,
}

impl Report {
    fn new(command: &str, seed: Option<u64>) -> Report {
        Report {
            command: command.to_string(),
            params: BTreeMap::new(),
            results: Vec::new(),
            details: Value::Null,
            provenance: Provenance {
                version: env!("CARGO_PKG_VERSION"),
                seed,
                rng: "chacha8, per-stage substreams",
            },
        }
    }

    fn param(&mut self, key: &str, v: impl Serialize) {
        self.params.insert(key.to_string(), json!(v));
    }

    fn push(&mut self, name: &str, value: Number) {
        self.results.push(Entry {
            name: name.to_string(),
            value,
        });
    }

    pub fn result(&self, name: &str) -> Option<&Number> {
        self.results.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Parameters accepted by [`bound_report`]; each bound uses a subset.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundArgs {
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub r: Option<usize>,
    pub t: Option<usize>,
    pub q: Option<u32>,
    pub d: Option<usize>,
    pub delta: Option<f64>,
    pub rate: Option<f64>,
    pub oracle: Option<String>,
}

pub const BOUND_NAMES: [&str; 16] = [
    "singleton",
    "rate_t",
    "d2",
    "rpdv",
    "shortening",
    "gv_finite",
    "gv_classic",
    "envelope",
    "singleton_asym",
    "plotkin_asym",
    "lp_asym",
    "gv_asym",
    "gv2_asym",
    "sa_asym",
    "at1_asym",
    "expander",
];

fn need<T: Copy>(v: Option<T>, flag: &str, bound: &str) -> Result<T> {
    v.ok_or_else(|| Error::Usage(format!("bound `{bound}` needs --{flag}")))
}

fn oracle_from(name: Option<&str>) -> Result<KqOracle> {
    match name.unwrap_or("singleton") {
        "singleton" => Ok(KqOracle::Singleton),
        "plotkin" => Ok(KqOracle::Plotkin),
        "sphere-packing" => Ok(KqOracle::SpherePacking),
        other => Err(Error::Usage(format!(
            "unknown oracle `{other}` (expected singleton, plotkin or sphere-packing)"
        ))),
    }
}

/// Evaluates one named bound.
pub fn bound_report(name: &str, a: &BoundArgs) -> Result<Report> {
    let mut rep = Report::new("bounds", None);
    rep.param("name", name);
    for (key, v) in [("n", a.n), ("k", a.k), ("r", a.r), ("t", a.t), ("d", a.d)] {
        if let Some(v) = v {
            rep.param(key, v);
        }
    }
    if let Some(q) = a.q {
        rep.param("q", q);
    }
    if let Some(x) = a.delta {
        rep.param("delta", x);
    }
    if let Some(x) = a.rate {
        rep.param("rate", x);
    }
    let n = || need(a.n, "n", name);
    let k = || need(a.k, "k", name);
    let r = || need(a.r, "r", name);
    let t = || need(a.t, "t", name);
    let q = || need(a.q, "q", name);
    let delta = || need(a.delta, "delta", name);
    let asym = |p: AsymptoticPoint, tol: f64, rep: &mut Report| {
        rep.push("value", Number::float(p.value, tol));
        rep.details = json!(p);
    };
    match name {
        "singleton" => rep.push("d_max", Number::exact(finite::singleton_lrc(n()?, k()?, r()?)?)),
        "rate_t" => {
            let v = finite::rate_bound_t(r()?, t()?);
            rep.push("rate_max", Number::exact(ratio_string(&v)));
        }
        "d2" => rep.push("d_max", Number::exact(finite::distance_bound_t(n()?, k()?, r()?, t()?)?)),
        "rpdv" => rep.push("d_max", Number::exact(finite::rpdv_bound(n()?, k()?, r()?, t()?)?)),
        "shortening" => {
            let oracle = oracle_from(a.oracle.as_deref())?;
            rep.param("oracle", oracle.name());
            let v = finite::shortening_bound(n()?, need(a.d, "d", name)?, r()?, q()?, &oracle)?;
            rep.push("k_max", Number::exact(v));
        }
        "gv_finite" => {
            let c = finite::gv_finite_certificate(n()?, k()?, r()?, q()?)?;
            rep.push("d_certified", Number::exact(c.d));
            rep.details = json!({ "s": format!("{}/{}", c.s_numer, c.s_denom) });
        }
        "gv_classic" => rep.push("d_certified", Number::exact(finite::gv_classic_lrc(n()?, k()?, r()?, q()?)?)),
        "envelope" => {
            let e = finite::er_envelope(r()?, t()?)?;
            rep.push("rate_product", Number::exact(ratio_string(&e.rate_product)));
            rep.push("rate_root", Number::float(e.rate_root, 1e-15));
            rep.details = json!(e);
        }
        "singleton_asym" => rep.push("value", Number::float(asymptotic::singleton_asym(r()?, delta()?)?, 1e-15)),
        "plotkin_asym" => rep.push("value", Number::float(asymptotic::plotkin_asym(r()?, delta()?, q()?)?, 1e-15)),
        "lp_asym" => {
            let (v, tau) = asymptotic::lp_asym(r()?, delta()?, q()?)?;
            rep.push("value", Number::float(v, 1e-8));
            rep.details = json!({ "tau": tau });
        }
        "gv_asym" => asym(asymptotic::gv_asym(r()?, delta()?, q()?)?, 1e-9, &mut rep),
        "gv2_asym" => asym(asymptotic::gv2_asym(r()?, delta()?, q()?)?, 1e-9, &mut rep),
        "sa_asym" => rep.push("value", Number::float(asymptotic::sa_asym(r()?, t()?, delta()?)?, 1e-15)),
        "at1_asym" => rep.push("value", Number::float(asymptotic::at1_asym(r()?, t()?, delta()?)?, 1e-15)),
        "expander" => {
            let p = expander_lower_bound(r()?, t()?, need(a.rate, "rate", name)?)?;
            rep.push("delta", Number::float(p.delta, 1e-10));
            rep.details = json!(p);
        }
        _ => {
            return Err(Error::Usage(format!(
                "unknown bound `{name}`; valid names: {}",
                BOUND_NAMES.join(", ")
            )))
        }
    }
    Ok(rep)
}

/// n, k, d, locality certificates and comparisons with the distance bounds
/// for a code read from a file.
pub fn verify_report(file: &CodeFile, r: usize, t: usize) -> Result<Report> {
    let code = file.code();
    let (n, k) = (code.n(), code.k());
    let mut rep = Report::new("verify", None);
    rep.param("q", code.q());
    rep.param("r", r);
    rep.param("t", t);
    let d = code.min_distance()?;
    rep.push("n", Number::exact(n));
    rep.push("k", Number::exact(k));
    rep.push("d", Number::exact(d));
    let profile = locality_profile(&code, r, t)?;
    let mut meets = serde_json::Map::new();
    let mut bound = |rep: &mut Report, name: &str, v: Result<i64>| {
        if let Ok(v) = v {
            rep.push(name, Number::exact(v));
            meets.insert(name.to_string(), json!(v == d as i64));
        }
    };
    if k >= 1 {
        if r <= k {
            bound(&mut rep, "singleton_lrc", finite::singleton_lrc(n, k, r));
        }
        bound(&mut rep, "distance_bound_t", finite::distance_bound_t(n, k, r, t));
        bound(&mut rep, "rpdv_bound", finite::rpdv_bound(n, k, r, t));
    }
    let closure = if profile.is_success() && k >= 2 {
        let g = RecoveryGraph::from_profile(&profile)?;
        let search = best_closure_search(&g, k - 1)?;
        let cert = distance_certificate(&code, &g, &search.seed_set)?;
        json!({ "seed_set": search.seed_set, "closure_size": search.result.size(), "exact_search": search.exact, "distance_upper_bound": cert })
    } else {
        Value::Null
    };
    rep.details = json!({
        "locality_ok": profile.is_success(),
        "meets": meets,
        "locality": profile,
        "closure": closure,
    });
    Ok(rep)
}

/// %g-style formatting with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mant, e) = sci.split_once('e').expect("scientific form");
    let e: i32 = e.parse().expect("exponent");
    if e < -5 || e >= digits as i32 {
        return format!("{}e{e}", trim_zeros(mant));
    }
    let decimals = (digits as i32 - 1 - e).max(0) as usize;
    trim_zeros(&format!("{:.*}", decimals, x)).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub const CURVE_HEADER: &str = "bound,q,r,t,delta,value,aux1,aux2";

/// CSV rows with 12 significant digits and LF line endings.
pub fn curve_csv(points: &[AsymptoticPoint]) -> String {
    let mut s = String::from(CURVE_HEADER);
    s.push('\n');
    let opt = |v: Option<f64>| v.map_or(String::new(), |x| format_sig(x, 12));
    for p in points {
        let q = p.q.map_or("large".to_string(), |q| q.to_string());
        writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            p.bound,
            q,
            p.r,
            p.t,
            format_sig(p.delta, 12),
            format_sig(p.value, 12),
            opt(p.aux1),
            opt(p.aux2)
        )
        .expect("writing to a String");
    }
    s
}

/// Seed of sample `i` in a batch starting at `seed`.
pub fn batch_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add(i as u64)
}

/// Samples `batch` codes (seeds seed, seed+1, …) and aggregates distances,
/// dimensions and locality. Returns the report and the first parity-check
/// matrix.
pub fn sample_report(spec: EnsembleSpec, batch: usize) -> Result<(Report, Matrix)> {
    if batch == 0 {
        return Err(Error::Usage("--batch must be at least 1".into()));
    }
    let mut rep = Report::new("sample", Some(spec.seed));
    rep.param("spec", spec);
    rep.param("batch", batch);
    if spec.kind == EnsembleKind::ExpanderLrc {
        return expander_batch(spec, batch, rep);
    }
    let declared_t = if spec.kind == EnsembleKind::SingleLrc { 1 } else { 2 };
    let outcomes = par::map_indexed(batch, |i| -> Result<_> {
        let s = EnsembleSpec { seed: batch_seed(spec.seed, i), ..spec };
        let sample = match spec.kind {
            EnsembleKind::SingleLrc => sample_single(s)?,
            _ => sample_double(s)?,
        };
        let d = sample.code.min_distance()?;
        let locality = locality_profile(&sample.code, spec.r, declared_t)?.is_success();
        Ok((sample.code.k(), d, locality, sample.parity_check))
    });
    let mut first = None;
    let mut d_hist = BTreeMap::new();
    let mut k_hist = BTreeMap::new();
    let mut locality_pass = 0;
    let mut sound = 0;
    let mut distances = Vec::with_capacity(batch);
    for o in outcomes {
        let (k, d, loc, h) = o?;
        *d_hist.entry(d).or_insert(0usize) += 1;
        *k_hist.entry(k).or_insert(0usize) += 1;
        locality_pass += loc as usize;
        let bound = finite::distance_bound_t(spec.n, k, spec.r, declared_t)?;
        sound += (d as i64 <= bound) as usize;
        distances.push(d);
        first.get_or_insert(h);
    }
    let max_d = *distances.iter().max().expect("non-empty batch");
    let mean = distances.iter().sum::<usize>() as f64 / batch as f64;
    rep.push("locality_pass", Number::exact(locality_pass));
    rep.push("max_distance", Number::exact(max_d));
    rep.push("mean_distance", Number::float(mean, 0.0));
    rep.push("within_distance_bound_t", Number::exact(sound));
    let mut details = json!({
        "declared_t": declared_t,
        "distance_histogram": d_hist,
        "dimension_histogram": k_hist,
    });
    if spec.kind == EnsembleKind::SingleLrc {
        if let Ok(g) = finite::gv_finite(spec.n, spec.k, spec.r, spec.q) {
            rep.push("gv_finite", Number::exact(g));
            details["samples_meeting_gv_finite"] = json!(distances.iter().filter(|&&d| d >= g).count());
        }
        if let Ok(g) = finite::gv_classic_lrc(spec.n, spec.k, spec.r, spec.q) {
            rep.push("gv_classic", Number::exact(g));
        }
    }
    rep.details = details;
    Ok((rep, first.expect("non-empty batch")))
}

fn expander_batch(spec: EnsembleSpec, batch: usize, mut rep: Report) -> Result<(Report, Matrix)> {
    let outcomes = par::map_indexed(batch, |i| {
        sample_expander_code(EnsembleSpec { seed: batch_seed(spec.seed, i), ..spec })
    });
    let mut samples = Vec::new();
    let mut retries_exhausted = 0;
    for o in outcomes {
        match o {
            Ok(s) => samples.push(s),
            Err(Error::RetryExhausted(_)) => retries_exhausted += 1,
            Err(e) => return Err(e),
        }
    }
    let completed = samples.len();
    let count = |f: &dyn Fn(&ExpanderSample) -> bool| samples.iter().filter(|s| f(s)).count();
    rep.push("completed", Number::exact(completed));
    rep.push("retries_exhausted", Number::exact(retries_exhausted));
    rep.push("locality_pass", Number::exact(count(&|s| s.locality_ok)));
    rep.push("rate_within_max", Number::exact(count(&|s| s.rate_within_max)));
    rep.push("meets_delta_target", Number::exact(count(&|s| s.meets_target)));
    if completed > 0 {
        let frac = count(&|s| s.meets_target) as f64 / completed as f64;
        rep.push("meets_delta_target_fraction", Number::float(frac, 0.0));
        rep.push("delta_target", Number::float(samples[0].delta_target, 1e-10));
    }
    let rows: Vec<Value> = samples
        .iter()
        .map(|s| {
            json!({
                "seed": s.spec.seed,
                "k": s.k_actual,
                "d": s.min_distance,
                "d_target": s.d_target,
                "expander": s.expansion.is_expander,
                "four_cycle_free": s.expansion.four_cycle_free,
                "hall": s.hall.holds,
                "locality_ok": s.locality_ok,
            })
        })
        .collect();
    rep.details = json!({ "samples": rows });
    let first = samples
        .into_iter()
        .next()
        .ok_or(Error::RetryExhausted(MAX_RETRIES))?
        .parity_check;
    Ok((rep, first))
}

/// Exact rational as f64, for display.
pub fn ratio_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::BoundName;
    use crate::io::parse_code_file;

    #[test]
    fn sig_formatting() {
        assert_eq!(format_sig(0.75, 12), "0.75");
        assert_eq!(format_sig(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(1.0, 12), "1");
        assert_eq!(format_sig(0.0, 12), "0");
        assert_eq!(format_sig(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_sig(123456.0, 12), "123456");
        assert_eq!(format_sig(0.9999999999999, 12), "1");
    }

    #[test]
    fn named_bounds() {
        let a = BoundArgs { n: Some(6), k: Some(3), r: Some(2), t: Some(2), ..Default::default() };
        assert_eq!(bound_report("d2", &a).unwrap().result("d_max"), Some(&Number::exact(3)));
        let a = BoundArgs { r: Some(2), t: Some(2), ..Default::default() };
        assert_eq!(bound_report("rate_t", &a).unwrap().result("rate_max"), Some(&Number::exact("8/15")));
        let a = BoundArgs { q: Some(2), r: Some(3), delta: Some(0.5), ..Default::default() };
        assert_eq!(bound_report("gv_asym", &a).unwrap().result("value").unwrap().as_f64(), 0.0);
        assert!(matches!(bound_report("nope", &a), Err(Error::Usage(_))));
        assert!(matches!(bound_report("d2", &a), Err(Error::Usage(_))));
        for name in BOUND_NAMES {
            let a = BoundArgs {
                n: Some(120),
                k: Some(60),
                r: Some(3),
                t: Some(2),
                q: Some(2),
                d: Some(4),
                delta: Some(0.2),
                rate: Some(0.2),
                oracle: None,
            };
            bound_report(name, &a).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn verify_flags_equality() {
        let f = parse_code_file("LRC H q=2 n=6 rows=3\n0 0 0 1 1 1\n0 1 1 0 0 1\n1 0 1 0 1 0\n").unwrap();
        let rep = verify_report(&f, 2, 2).unwrap();
        assert_eq!(rep.result("d"), Some(&Number::exact(3)));
        assert_eq!(rep.details["meets"]["distance_bound_t"], json!(true));
        assert_eq!(rep.details["locality_ok"], json!(true));
        assert_eq!(rep.details["closure"]["distance_upper_bound"], json!(3));
    }

    #[test]
    fn csv_layout() {
        let pts = asymptotic::emit_curves(&[BoundName::Singleton, BoundName::Expander], 2, 3, 2, 0.1).unwrap();
        let csv = curve_csv(&pts);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 23);
        assert_eq!(lines[0], CURVE_HEADER);
        assert!(lines[1].starts_with("expander,large,3,2,0,0.5,"));
        assert_eq!(lines[12], "singleton,2,3,2,0,0.75,,");
        assert_eq!(lines[17], "singleton,2,3,2,0.5,0.375,,");
        assert!(csv.ends_with("singleton,2,3,2,1,0,,\n"));
    }

    #[test]
    fn sample_batches_are_deterministic() {
        let spec = EnsembleSpec { kind: EnsembleKind::SingleLrc, n: 8, k: 4, r: 3, t: 1, q: 2, seed: 7 };
        let (a, ha) = sample_report(spec, 10).unwrap();
        let (b, hb) = sample_report(spec, 10).unwrap();
        assert_eq!(a.to_json(), b.to_json());
        assert!(ha == hb);
        assert_eq!(a.result("locality_pass"), Some(&Number::exact(10)));
    }
}
