use std::cmp::Ordering;

use super::sft::split_sft;
use super::sofic::{degenerate, split_sofic};
use super::DecompositionReport;
use crate::algebra::{entropy, is_perron, within, Certainty, EntropyValue, Epsilon};
use crate::codes::{verify_decomposition, BlockMap};
use crate::error::{Error, Result};
use crate::shift::{min_step, ShiftSpace};

/// Splits φ through a shift of finite type whose entropy is within ε of
/// `target`.
///
/// The sofic split runs at ε/2. When its intermediate is already of finite
/// type that split is the answer; otherwise the first stage ψ is split again
/// with [`split_sft`] at ε/2 and the tails are chained.
pub fn decompose_dense(phi: &BlockMap, y: &ShiftSpace, target: &EntropyValue, eps: &Epsilon) -> Result<DecompositionReport> {
    if min_step(phi.domain())?.is_none() {
        return Err(Error::Precondition("domain is not of finite type".into()));
    }
    if let Some(r) = degenerate(phi, y, target, eps)? {
        return Ok(r);
    }
    let half = eps.halve();
    let mut first = split_sofic(phi, y, target, &half)?;
    first.epsilon = eps.clone();
    if let Some(k) = min_step(&first.intermediate)? {
        first.k_step = Some(k);
        first.trace.notes.push(format!("sofic stage is already {k}-step; second split not needed"));
        return Ok(first);
    }
    let psi = first.phi1.collapse()?;
    let second = split_sft(&psi, &first.intermediate, &half)?;
    let mut phi2 = second.phi2.clone();
    phi2.stages.extend(first.phi2.stages.iter().cloned());
    let phi1 = second.phi1.clone();
    let certificate = verify_decomposition(phi, &phi1, &phi2, &second.intermediate, y)?;
    let h = second.intermediate_entropy.clone();
    if within(&h, target, eps) != Certainty::Yes {
        return Err(Error::Certificate("intermediate entropy is not within ε of the target".into()));
    }
    let mut trace = first.trace;
    trace.sft = second.trace.sft;
    Ok(DecompositionReport {
        phi1,
        phi2,
        intermediate: second.intermediate,
        intermediate_entropy: h,
        target: target.clone(),
        epsilon: eps.clone(),
        certificate,
        k_step: second.k_step,
        trace,
    })
}

#[derive(Clone, Debug)]
pub enum SampleStatus {
    Achieved { entropy: EntropyValue, perron: Option<bool>, k_step: Option<usize> },
    OutOfRange,
    Failed(String),
}

#[derive(Clone, Debug)]
pub struct SampleRow {
    pub target: EntropyValue,
    pub status: SampleStatus,
}

/// Runs [`decompose_dense`] at each grid point and records what was reached.
/// Failures are kept as rows.
pub fn sample_s0(phi: &BlockMap, y: &ShiftSpace, grid: &[EntropyValue], eps: &Epsilon) -> Result<Vec<SampleRow>> {
    let hx = entropy(phi.domain())?;
    let hy = entropy(y)?;
    let mut rows = Vec::with_capacity(grid.len());
    for t in grid {
        let status = if t.cmp_exact(&hy) == Ordering::Less || t.cmp_exact(&hx) == Ordering::Greater {
            SampleStatus::OutOfRange
        } else {
            match decompose_dense(phi, y, t, eps) {
                Ok(r) => SampleStatus::Achieved {
                    perron: is_perron(&r.intermediate_entropy.base).ok(),
                    entropy: r.intermediate_entropy,
                    k_step: r.k_step,
                },
                Err(e) => SampleStatus::Failed(e.to_string()),
            }
        };
        rows.push(SampleRow { target: t.clone(), status });
    }
    Ok(rows)
}
