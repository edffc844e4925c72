//! Random code ensembles: block parity checks plus uniform rows, the
//! complete-graph incidence variant with two recovering sets, and the
//! expander-graph construction.

mod expander_code;
mod graph;
mod hall;

pub use expander_code::{sample_expander_code, schwartz_zippel_matrix, ExpanderSample};
pub use graph::{
    sample_biregular, sample_biregular_four_cycle_free, test_expansion, BipartiteGraph, ExpanderReport, MAX_RETRIES,
};
pub use hall::{hall_check, HallResult};

use rand::Rng;
use serde::Serialize;

use crate::code::{binomial_u64, LinearCode};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{complete_graph_incidence, Matrix};
use crate::rng::{substream, StageRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    SingleLrc,
    DoubleLrc,
    ExpanderLrc,
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<EnsembleKind> {
        match s {
            "single" | "single-lrc" => Ok(EnsembleKind::SingleLrc),
            "double" | "double-lrc" => Ok(EnsembleKind::DoubleLrc),
            "expander" | "expander-lrc" => Ok(EnsembleKind::ExpanderLrc),
            _ => Err(Error::domain(format!("unknown ensemble `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    pub k: usize,
    pub r: usize,
    pub t: usize,
    pub q: u32,
    pub seed: u64,
}

/// A sampled parity-check matrix and the code it defines. The code's
/// dimension can exceed the requested k when random rows are dependent.
#[derive(Clone, Debug)]
pub struct EnsembleSample {
    pub spec: EnsembleSpec,
    pub parity_check: Matrix,
    pub code: LinearCode,
}

fn uniform_rows(field: &Field, rows: usize, cols: usize, rng: &mut StageRng) -> Matrix {
    let q = field.order();
    let data = (0..rows * cols).map(|_| rng.gen_range(0..q)).collect();
    Matrix::new(field, rows, cols, data).expect("entries in range")
}

fn block_diagonal(field: &Field, block: &Matrix, copies: usize) -> Matrix {
    let (br, bc) = (block.rows(), block.cols());
    let mut m = Matrix::zeros(field, br * copies, bc * copies);
    for c in 0..copies {
        for i in 0..br {
            for j in 0..bc {
                m.set(c * br + i, c * bc + j, block.get(i, j));
            }
        }
    }
    m
}

fn finish(spec: EnsembleSpec, field: &Field, upper: Matrix, lower_rows: usize) -> Result<EnsembleSample> {
    let mut rng = substream(spec.seed, "ensemble-lower", 0);
    let lower = uniform_rows(field, lower_rows, spec.n, &mut rng);
    let h = upper.vstack(&lower)?;
    let code = LinearCode::from_parity(&h);
    Ok(EnsembleSample {
        spec,
        parity_check: h,
        code,
    })
}

/// n/(r+1) all-ones rows on consecutive blocks of r+1 coordinates, then
/// n − k − n/(r+1) uniform rows.
pub fn sample_single(spec: EnsembleSpec) -> Result<EnsembleSample> {
    let EnsembleSpec { n, k, r, q, .. } = spec;
    if spec.kind != EnsembleKind::SingleLrc {
        return Err(Error::domain("expected a single-lrc spec"));
    }
    if r == 0 || n == 0 || n % (r + 1) != 0 || k == 0 || k * (r + 1) > r * n {
        return Err(Error::domain(format!(
            "need (r+1) | n and 1 <= k <= rn/(r+1) (got n={n}, k={k}, r={r})"
        )));
    }
    let field = Field::new(q as u64)?;
    let blocks = n / (r + 1);
    let ones = Matrix::new(&field, 1, r + 1, vec![1; r + 1])?;
    let upper = block_diagonal(&field, &ones, blocks);
    finish(spec, &field, upper, n - k - blocks)
}

/// The vertex-edge incidence matrix of K_{r+2} with the last vertex row
/// removed: (r+1) × C(r+2, 2).
pub fn deleted_incidence(field: &Field, r: usize) -> Matrix {
    let full = complete_graph_incidence(field, r + 2);
    full.select_rows(&(0..=r).collect::<Vec<_>>())
}

/// m = n/C(r+2,2) copies of the deleted incidence matrix on consecutive
/// blocks, then n − k − m(r+1) uniform rows.
pub fn sample_double(spec: EnsembleSpec) -> Result<EnsembleSample> {
    let EnsembleSpec { n, k, r, q, .. } = spec;
    if spec.kind != EnsembleKind::DoubleLrc {
        return Err(Error::domain("expected a double-lrc spec"));
    }
    let block = binomial_u64(r + 2, 2) as usize;
    if r == 0 || n == 0 || n % block != 0 {
        return Err(Error::domain(format!("n={n} is not a multiple of C(r+2, 2) = {block}")));
    }
    let m = n / block;
    if k == 0 || k + m * (r + 1) > n {
        return Err(Error::domain(format!("need 1 <= k <= n - m(r+1) = {}", n - m * (r + 1))));
    }
    let field = Field::new(q as u64)?;
    let upper = block_diagonal(&field, &deleted_incidence(&field, r), m);
    finish(spec, &field, upper, n - k - m * (r + 1))
}
