//! Codes whose parity-check columns are random vectors supported on
//! neighbourhoods of an expander graph plus a block of shared rows.

use rand::Rng;
use serde::Serialize;

use super::graph::{sample_biregular_four_cycle_free, test_expansion, BipartiteGraph, ExpanderReport};
use super::hall::hall_check;
use super::{EnsembleKind, EnsembleSpec};
use crate::bounds::expander::expander_lower_bound;
use crate::code::{binomial_u64, Combinations, LinearCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::locality::locality_profile;
use crate::matrix::Matrix;
use crate::rng::substream;

/// Subfamily checks for Hall's condition stop being exhaustive above this.
pub const HALL_SUBFAMILY_CAP: u64 = 1 << 20;

/// Matrix with one column per set: column A carries independent uniform
/// non-zero entries in the rows listed in A and zeros elsewhere.
pub fn schwartz_zippel_matrix(sets: &[Vec<usize>], rows: usize, q: u32, seed: u64) -> Result<Matrix> {
    if (q as usize) < sets.len() + 2 {
        return Err(Error::domain(format!(
            "alphabet size {q} is too small for {} columns (need at least {})",
            sets.len(),
            sets.len() + 2
        )));
    }
    let field = Field::new(q as u64)?;
    let mut m = Matrix::zeros(&field, rows, sets.len());
    let mut rng = substream(seed, "schwartz-zippel", 0);
    for (c, set) in sets.iter().enumerate() {
        for &i in set {
            if i >= rows {
                return Err(Error::domain(format!("row {i} outside 0..{rows}")));
            }
            m.set(i, c, rng.gen_range(1..q));
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, Serialize)]
pub struct HallSummary {
    /// Largest subfamily size that was checked.
    pub max_size: usize,
    pub subfamilies_checked: u64,
    pub holds: bool,
    /// False when the subfamily count exceeded the cap and only the whole
    /// family was tested.
    pub exhaustive: bool,
    pub violator: Option<Vec<usize>>,
}

fn hall_subfamilies(sets: &[Vec<usize>], max_size: usize) -> Result<HallSummary> {
    let n = sets.len();
    let max_size = max_size.min(n);
    let total: u64 = (1..=max_size).map(|s| binomial_u64(n, s)).sum();
    let mut summary = HallSummary {
        max_size,
        subfamilies_checked: 0,
        holds: true,
        exhaustive: total <= HALL_SUBFAMILY_CAP,
        violator: None,
    };
    if !summary.exhaustive {
        let r = hall_check(sets)?;
        summary.subfamilies_checked = 1;
        summary.holds = r.holds;
        summary.violator = r.violator;
        return Ok(summary);
    }
    for size in 1..=max_size {
        for pick in Combinations::new(n, size) {
            let family: Vec<Vec<usize>> = pick.iter().map(|&i| sets[i].clone()).collect();
            summary.subfamilies_checked += 1;
            let r = hall_check(&family)?;
            if !r.holds {
                summary.holds = false;
                summary.violator = r.violator.map(|v| v.into_iter().map(|i| pick[i]).collect());
                return Ok(summary);
            }
        }
    }
    Ok(summary)
}

/// Everything measured on one sample of the expander construction.
#[derive(Clone, Debug, Serialize)]
pub struct ExpanderSample {
    pub spec: EnsembleSpec,
    pub graph: BipartiteGraph,
    /// Rows shared by every column after the p graph rows.
    pub shared_rows: usize,
    /// Relative distance promised at rate k/n, and the matching γ.
    pub delta_target: f64,
    pub gamma: f64,
    pub expansion: ExpanderReport,
    pub hall: HallSummary,
    pub k_actual: usize,
    pub rate: f64,
    pub rate_within_max: bool,
    pub min_distance: usize,
    /// ⌈δn⌉
    pub d_target: usize,
    pub meets_target: bool,
    pub locality_ok: bool,
    #[serde(skip)]
    pub parity_check: Matrix,
    #[serde(skip)]
    pub code: LinearCode,
}

/// Samples a 4-cycle-free (t, r+1)-biregular graph on n left vertices, forms
/// S_i = N(i) ∪ {p, …, n−k−1} with p = nt/(r+1), checks expansion and Hall's
/// condition at the (δ, γ) solving the rate equation for R = k/n, draws the
/// parity-check columns on those supports and measures the resulting code.
pub fn sample_expander_code(spec: EnsembleSpec) -> Result<ExpanderSample> {
    let EnsembleSpec { n, k, r, t, q, seed, .. } = spec;
    if spec.kind != EnsembleKind::ExpanderLrc {
        return Err(Error::domain("expected an expander-lrc spec"));
    }
    if n > 30 {
        return Err(Error::TooLarge {
            what: format!("expander pipeline at n = {n}"),
            cap_log2: 5,
        });
    }
    if t < 2 || r < t || (n * t) % (r + 1) != 0 {
        return Err(Error::domain(format!("need r >= t >= 2 and (r+1) | nt (got n={n}, r={r}, t={t})")));
    }
    let p = n * t / (r + 1);
    if k == 0 || k + p > n {
        return Err(Error::domain(format!("need 1 <= k <= n - nt/(r+1) = {}", n - p)));
    }
    let rows = n - k;
    let graph = sample_biregular_four_cycle_free(n, t, r + 1, seed)?;
    let target = expander_lower_bound(r, t, k as f64 / n as f64)?;
    let gamma = target.aux1.expect("solver reports gamma");
    let expansion = test_expansion(&graph, target.delta, gamma)?;
    let sets: Vec<Vec<usize>> = graph
        .adjacency
        .iter()
        .map(|nb| nb.iter().copied().chain(p..rows).collect())
        .collect();
    let max_size = ((target.delta * n as f64) + 1e-9).floor() as usize;
    let hall = hall_subfamilies(&sets, max_size)?;
    let h = schwartz_zippel_matrix(&sets, rows, q, seed)?;
    let code = LinearCode::from_parity(&h);
    let min_distance = code.min_distance()?;
    let locality_ok = locality_profile(&code, r, t)?.is_success();
    let rate = code.k() as f64 / n as f64;
    let d_target = (target.delta * n as f64 - 1e-9).ceil().max(0.0) as usize;
    Ok(ExpanderSample {
        spec,
        graph,
        shared_rows: rows - p,
        delta_target: target.delta,
        gamma,
        expansion,
        hall,
        k_actual: code.k(),
        rate,
        rate_within_max: rate <= 1.0 - t as f64 / (r + 1) as f64 + 1e-12,
        min_distance,
        d_target,
        meets_target: min_distance >= d_target,
        locality_ok,
        parity_check: h,
        code,
    })
}
