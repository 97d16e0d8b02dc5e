//! Compiled-in algebra fixtures, addressable by name.
//!
//! Every entry is built through the unified constructor and carries its
//! input `(D, F, h, x)`, so the closed-form norm `n((a,u)) = n_D(a) + h(u,u)`
//! can be recomputed and compared entry-wise against the attached form.

use crate::algebra::StructureAlgebra;
use crate::construct::{
    build_unified, gaussian_coefficients, hat_input, jspin_input, rank_one_scaled_form,
    split_coefficients, thakur_input, UnifiedInput,
};
use crate::error::{Error, Result};
use crate::forms::{
    CoefficientAlgebra, CrossProduct, DeterminantTrivialization, FreeRightModule,
    SesquilinearForm,
};
use crate::ring::Ring;

pub use crate::construct::cay_rank2;

/// A named fixture: the built algebra plus its unified provenance.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub algebra: StructureAlgebra,
    pub input: UnifiedInput,
}

pub const NAMES: [&str; 9] = [
    "hamilton",
    "split-quaternion",
    "gaussian-etale",
    "split-etale",
    "split-octonion",
    "octonion-gaussian",
    "split-octonion-f5",
    "jspin-3",
    "colour-7",
];

/// Builds a catalog entry; `ring` overrides the default base ring (the
/// rationals, except for `split-octonion-f5` which is pinned to `F_5`).
pub fn build(name: &str, ring: Option<Ring>) -> Result<CatalogEntry> {
    let q = ring.unwrap_or(Ring::Rationals);
    let entry = |name: &'static str, input: UnifiedInput| -> Result<CatalogEntry> {
        let algebra = build_unified(&input)?;
        Ok(CatalogEntry { name, algebra, input })
    };
    match name {
        // Cay(R[i], -1): the quaternions as (D, D, h, 0) with h(u,v) = conj(u) v
        "hamilton" => {
            let coeff = gaussian_coefficients(&q);
            let h = rank_one_scaled_form(&coeff, &coeff.unit())?;
            let zero = CrossProduct::zero(&q, 2);
            entry("hamilton", UnifiedInput::new(h, zero)?)
        }
        // Cay(R x R, -1): the split quaternions
        "split-quaternion" => {
            let coeff = split_coefficients(&q);
            let h = rank_one_scaled_form(&coeff, &coeff.unit())?;
            let zero = CrossProduct::zero(&q, 2);
            entry("split-quaternion", UnifiedInput::new(h, zero)?)
        }
        // R[w]/(w^2 + 1) as (R, R, <1>, 0)
        "gaussian-etale" => {
            let coeff = CoefficientAlgebra::base(&q);
            let h = rank_one_scaled_form(&coeff, &[q.one()])?;
            let zero = CrossProduct::zero(&q, 1);
            entry("gaussian-etale", UnifiedInput::new(h, zero)?)
        }
        // R[w]/(w^2 - 1), split with zero divisors, as (R, R, <-1>, 0)
        "split-etale" => {
            let coeff = CoefficientAlgebra::base(&q);
            let h = rank_one_scaled_form(&coeff, &[q.from_i64(-1)])?;
            let zero = CrossProduct::zero(&q, 1);
            entry("split-etale", UnifiedInput::new(h, zero)?)
        }
        "split-octonion" => {
            let coeff = split_coefficients(&q);
            let module = FreeRightModule::new(coeff.clone(), 3)?;
            let h = SesquilinearForm::identity(module);
            let alpha = DeterminantTrivialization::new(coeff.clone(), coeff.unit())?;
            entry("split-octonion", thakur_input(&h, &alpha)?)
        }
        "octonion-gaussian" => {
            let coeff = gaussian_coefficients(&q);
            let module = FreeRightModule::new(coeff.clone(), 3)?;
            let h = SesquilinearForm::identity(module);
            let alpha = DeterminantTrivialization::new(coeff.clone(), coeff.unit())?;
            entry("octonion-gaussian", thakur_input(&h, &alpha)?)
        }
        "split-octonion-f5" => {
            let f5 = Ring::prime_field(5)?;
            let coeff = split_coefficients(&f5);
            let module = FreeRightModule::new(coeff.clone(), 3)?;
            let h = SesquilinearForm::identity(module);
            let alpha = DeterminantTrivialization::new(coeff.clone(), coeff.unit())?;
            entry("split-octonion-f5", thakur_input(&h, &alpha)?)
        }
        // JSpin(F, diag(1, 2, 3))
        "jspin-3" => {
            let gram = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| if i == j { q.from_i64(i as i64 + 1) } else { q.zero() })
                        .collect()
                })
                .collect::<Vec<_>>();
            entry("jspin-3", jspin_input(&q, &gram)?)
        }
        // hat of the split octonions: the rank-7 colour algebra
        "colour-7" => {
            let coeff = split_coefficients(&q);
            let module = FreeRightModule::new(coeff.clone(), 3)?;
            let h = SesquilinearForm::identity(module);
            let alpha = DeterminantTrivialization::new(coeff.clone(), coeff.unit())?;
            let oct_input = thakur_input(&h, &alpha)?;
            entry("colour-7", hat_input(&oct_input)?)
        }
        other => Err(Error::InvalidInput(format!("unknown catalog name: {other}"))),
    }
}

/// Recomputes the closed-form norm from the entry's unified input and
/// compares it entry-wise with the attached norm.
pub fn norm_matches_input(entry: &CatalogEntry) -> Result<bool> {
    let algebra = &entry.algebra;
    let Some(attached) = algebra.norm() else {
        return Ok(false);
    };
    let coeff = entry.input.coeff();
    let module = entry.input.module();
    let h = entry.input.form();
    let d = coeff.rank();
    let m = module.r_rank();
    let d_norm = coeff.algebra().norm().expect("coefficient norm");
    // diagonal: n_D on the D-block, h(u, u) on the F-block
    for a in 0..d {
        if attached.diag[a] != d_norm.diag[a] {
            return Ok(false);
        }
    }
    for r in 0..m {
        let fr = module.basis_vector(r / d, r % d);
        let value = h.eval(&fr, &fr);
        let Some(lambda) = coeff.r_multiple_of(&value)? else {
            return Ok(false);
        };
        if attached.diag[d + r] != lambda {
            return Ok(false);
        }
    }
    // polarization: block-diagonal with t_D(h(u, v)) on the F-block
    for a in 0..d {
        for b in 0..d {
            if attached.polar[a][b] != d_norm.polar[a][b] {
                return Ok(false);
            }
        }
        for r in 0..m {
            if !attached.polar[a][d + r].is_zero() || !attached.polar[d + r][a].is_zero() {
                return Ok(false);
            }
        }
    }
    for r in 0..m {
        let fr = module.basis_vector(r / d, r % d);
        for t in 0..m {
            let ft = module.basis_vector(t / d, t % d);
            if attached.polar[d + r][d + t] != coeff.trace_of(&h.eval(&fr, &ft)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::check_scalar_involution;

    #[test]
    fn all_entries_build() {
        for name in NAMES {
            let entry = build(name, None).unwrap();
            assert_eq!(entry.name, name);
            assert!(entry.algebra.rank() >= 2);
        }
    }

    #[test]
    fn expected_ranks() {
        let ranks: Vec<(&str, usize)> = NAMES
            .iter()
            .map(|n| (*n, build(n, None).unwrap().algebra.rank()))
            .collect();
        assert_eq!(
            ranks,
            vec![
                ("hamilton", 4),
                ("split-quaternion", 4),
                ("gaussian-etale", 2),
                ("split-etale", 2),
                ("split-octonion", 8),
                ("octonion-gaussian", 8),
                ("split-octonion-f5", 8),
                ("jspin-3", 4),
                ("colour-7", 7),
            ]
        );
    }

    #[test]
    fn norms_match_inputs() {
        for name in NAMES {
            let entry = build(name, None).unwrap();
            assert!(norm_matches_input(&entry).unwrap(), "{name}");
            let sigma = entry.algebra.involution().unwrap().clone();
            let check = check_scalar_involution(&entry.algebra, &sigma).unwrap();
            assert!(check.ok, "{name}");
        }
    }

    #[test]
    fn ring_override() {
        let f7 = Ring::prime_field(7).unwrap();
        let entry = build("hamilton", Some(f7.clone())).unwrap();
        assert_eq!(entry.algebra.ring(), &f7);
        assert!(build("unknown", None).is_err());
    }
}
