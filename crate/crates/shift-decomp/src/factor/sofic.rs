use std::cmp::Ordering;

use super::normalize::{build_alpha, build_theta, hat_z, normalize};
use super::subsft::find_sub_sft;
use super::{DecompositionReport, SoficTrace, Trace};
use crate::algebra::{entropy, within, Certainty, EntropyValue, Epsilon};
use crate::codes::{image, is_factor_onto, verify_decomposition, BlockMap, CodeChain};
use crate::error::{Error, Result};
use crate::shift::{is_subshift_of, min_step, ShiftSpace};

/// Upper limit on the number of α-iterations.
pub const MAX_ALPHA_ITERATIONS: usize = 40;

/// Reports for the two ends of the interval, where no construction is needed.
pub(crate) fn degenerate(
    phi: &BlockMap,
    y: &ShiftSpace,
    target: &EntropyValue,
    eps: &Epsilon,
) -> Result<Option<DecompositionReport>> {
    let x = phi.domain();
    let hx = entropy(x)?;
    let hy = entropy(y)?;
    if target.cmp_exact(&hy) == Ordering::Less || target.cmp_exact(&hx) == Ordering::Greater {
        return Err(Error::Precondition("target lies outside [h(Y), h(X)]".into()));
    }
    let (phi1, phi2, mid, note) = if target.cmp_exact(&hy) == Ordering::Equal {
        (CodeChain::single(phi.clone()), CodeChain::single(BlockMap::identity(y.clone())?), y.clone(), "target equals h(Y)")
    } else if target.cmp_exact(&hx) == Ordering::Equal {
        (CodeChain::single(BlockMap::identity(x.clone())?), CodeChain::single(phi.clone()), x.clone(), "target equals h(X)")
    } else {
        return Ok(None);
    };
    let certificate = verify_decomposition(phi, &phi1, &phi2, &mid, y)?;
    let h = entropy(&mid)?;
    Ok(Some(DecompositionReport {
        phi1,
        phi2,
        k_step: min_step(&mid)?,
        intermediate: mid,
        intermediate_entropy: h,
        target: target.clone(),
        epsilon: eps.clone(),
        certificate,
        trace: Trace { notes: vec![note.into()], ..Default::default() },
    }))
}

/// Splits φ: X → Y through a sofic shift whose entropy is within `eps`
/// of `target`.
///
/// A sub-shift of finite type Z with |h(Z) − target| < ε/2 is found, the
/// triple is normalized, and α is applied to θ(X) until the iterate is
/// ε/2-close to h(Z). φ₁ is the chain β, θ, α, …, α; φ₂ maps Y-symbols to
/// themselves and Z-symbols through φ.
pub fn split_sofic(phi: &BlockMap, y: &ShiftSpace, target: &EntropyValue, eps: &Epsilon) -> Result<DecompositionReport> {
    if let Some(r) = degenerate(phi, y, target, eps)? {
        return Ok(r);
    }
    if !is_factor_onto(phi, y)? {
        return Err(Error::Precondition("the code does not map onto Y".into()));
    }
    let x = phi.domain();
    let hy = entropy(y)?;
    let half = eps.halve();
    let z = find_sub_sft(x, target, &hy, &half)?;
    let hz = entropy(&z)?;
    let t = normalize(x, &z, phi)?;
    let theta = build_theta(&t)?;
    let alpha = build_alpha(&t)?;
    let ybar = image(&t.phi)?;

    let mut stages = vec![t.beta.clone(), theta.clone()];
    let mut tilde = image(&theta)?;
    let mut tilde_h = vec![entropy(&tilde)?];
    let mut hat_h = Vec::new();
    let mut sandwich_ok = true;
    let mut n = 0;
    loop {
        let hat = hat_z(&t, &ybar, n)?;
        let hh = entropy(&hat)?;
        let ht = tilde_h.last().unwrap();
        sandwich_ok &= is_subshift_of(&t.z, &tilde)?
            && is_subshift_of(&tilde, &hat)?
            && hz.cmp_exact(ht) != Ordering::Greater
            && ht.cmp_exact(&hh) != Ordering::Greater
            && hat_h.last().map_or(true, |p: &EntropyValue| hh.cmp_exact(p) != Ordering::Greater);
        hat_h.push(hh);
        if within(ht, &hz, &half) == Certainty::Yes {
            break;
        }
        if n >= MAX_ALPHA_ITERATIONS {
            return Err(Error::IterationCap(format!(
                "no α-iterate within ε/2 of h(Z) after {n} steps; entropies {:?}",
                tilde_h.iter().map(|h| h.nats()).collect::<Vec<_>>()
            )));
        }
        let a = alpha.restrict(&tilde)?;
        tilde = image(&a)?;
        tilde_h.push(entropy(&tilde)?);
        stages.push(a);
        n += 1;
    }
    let phi1 = CodeChain::new(stages)?;
    let back = BlockMap::from_fn_into(tilde.clone(), 0, 0, phi.target().clone(), |s| {
        if t.z_symbols.contains(s[0]) {
            t.phi_of(s[0])
        } else {
            s[0].to_string()
        }
    })?;
    let phi2 = CodeChain::single(back);
    let certificate = verify_decomposition(phi, &phi1, &phi2, &tilde, y)?;
    let h = tilde_h.last().unwrap().clone();
    if within(&h, target, eps) != Certainty::Yes {
        return Err(Error::Certificate("intermediate entropy is not within ε of the target".into()));
    }
    Ok(DecompositionReport {
        phi1,
        phi2,
        k_step: min_step(&tilde)?,
        intermediate: tilde,
        intermediate_entropy: h,
        target: target.clone(),
        epsilon: eps.clone(),
        certificate,
        trace: Trace {
            sofic: Some(SoficTrace {
                sub_sft: z,
                sub_sft_entropy: hz,
                block_length: t.block_length,
                iterations: n,
                tilde_entropies: tilde_h,
                hat_entropies: hat_h,
                sandwich_ok,
            }),
            sft: None,
            notes: vec![],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::perron_root;

    #[test]
    fn golden_target() {
        let x = ShiftSpace::edge_shift(vec![vec![2]]).unwrap();
        let y = ShiftSpace::edge_shift(vec![vec![1]]).unwrap();
        let phi = BlockMap::from_fn_into(x, 0, 0, y.alphabet(), |_| "0".into()).unwrap();
        let target = EntropyValue::from_base(perron_root(&[vec![1, 1], vec![1, 0]]).unwrap());
        let r = split_sofic(&phi, &y, &target, &Epsilon::parse("1/20").unwrap()).unwrap();
        assert_eq!(within(&r.intermediate_entropy, &target, &r.epsilon), Certainty::Yes);
        assert!(r.trace.sofic.as_ref().unwrap().sandwich_ok);
        let low = split_sofic(&phi, &y, &EntropyValue::zero(), &Epsilon::parse("1/20").unwrap()).unwrap();
        assert_eq!(low.phi1.stages.len(), 1);
        assert!(split_sofic(&phi, &y, &EntropyValue::log_int(3), &Epsilon::parse("1/20").unwrap()).is_err());
    }
}
