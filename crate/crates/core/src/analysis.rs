//! Structural analysis: nuclei, radicals, symmetric/skew splittings,
//! orthogonal decompositions, cross-product criteria, composition-algebra
//! classification, and zero-divisor search.
//!
//! Solvers run deterministic Gaussian elimination over the exact base field
//! (first-nonzero pivoting), so returned bases are reproducible.

use crate::algebra::{check_composition, check_scalar_involution, StructureAlgebra};
use crate::construct::{build_unified, UnifiedInput};
use crate::error::{Error, Result};
use crate::forms::{
    check_theorem1_conditions, is_hermitian, CoefficientAlgebra, CrossProduct, FreeRightModule,
    SesquilinearForm,
};
use crate::linalg;
use crate::poly::MultiPoly;
use crate::ring::{Ring, Scalar};

/// A submodule given by a reduced basis and its provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct SubmoduleBasis {
    pub role: SubmoduleRole,
    pub vectors: Vec<Vec<Scalar>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubmoduleRole {
    Nucleus,
    Radical,
    Skew,
    Sym,
    OrthoComplement,
}

impl SubmoduleBasis {
    pub fn dimension(&self) -> usize {
        self.vectors.len()
    }
}

/// The nucleus `{x : [x,A,A] = [A,x,A] = [A,A,x] = 0}` as a reduced basis.
/// The associator is linear in each slot, so basis pairs suffice.
pub fn nucleus(algebra: &StructureAlgebra) -> Result<SubmoduleBasis> {
    let ring = algebra.ring();
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    let n = algebra.rank();
    // associator on basis triples
    let mut assoc = vec![vec![vec![Vec::new(); n]; n]; n];
    for a in 0..n {
        let ea = algebra.basis_coords(a);
        for i in 0..n {
            let ei = algebra.basis_coords(i);
            let ea_ei = algebra.mul_vec(&ea, &ei);
            for j in 0..n {
                let ej = algebra.basis_coords(j);
                let lhs = algebra.mul_vec(&ea_ei, &ej);
                let rhs = algebra.mul_vec(&ea, &algebra.mul_vec(&ei, &ej));
                assoc[a][i][j] =
                    lhs.iter().zip(rhs.iter()).map(|(x, y)| x.sub(y)).collect::<Vec<_>>();
            }
        }
    }
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // [x, e_i, e_j]_k = 0, [e_i, x, e_j]_k = 0, [e_i, e_j, x]_k = 0
                rows.push((0..n).map(|a| assoc[a][i][j][k].clone()).collect());
                rows.push((0..n).map(|a| assoc[i][a][j][k].clone()).collect());
                rows.push((0..n).map(|a| assoc[i][j][a][k].clone()).collect());
            }
        }
    }
    let vectors = linalg::kernel_basis(ring, &rows)?;
    Ok(SubmoduleBasis { role: SubmoduleRole::Nucleus, vectors })
}

/// Which attached bilinear form to take the radical of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RadicalForm {
    NormPolar,
    TraceForm,
}

/// `Rad(q) = {a : q(a, A) = 0}`, the kernel of the chosen Gram matrix.
pub fn radical(algebra: &StructureAlgebra, which: RadicalForm) -> Result<SubmoduleBasis> {
    let ring = algebra.ring();
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    let gram = match which {
        RadicalForm::NormPolar => algebra
            .norm()
            .ok_or_else(|| Error::InvalidInput("algebra has no norm attached".into()))?
            .polar
            .clone(),
        RadicalForm::TraceForm => {
            let trace = algebra
                .trace()
                .ok_or_else(|| Error::InvalidInput("algebra has no trace attached".into()))?;
            let n = algebra.rank();
            let mut t = vec![vec![ring.zero(); n]; n];
            for i in 0..n {
                for j in 0..n {
                    let prod = algebra.mul_vec(&algebra.basis_coords(i), &algebra.basis_coords(j));
                    t[i][j] = prod
                        .iter()
                        .zip(trace.iter())
                        .fold(ring.zero(), |acc, (p, tv)| acc.add(&p.mul(tv)));
                }
            }
            t
        }
    };
    let vectors = linalg::kernel_basis(ring, &gram)?;
    Ok(SubmoduleBasis { role: SubmoduleRole::Radical, vectors })
}

/// The +1 and -1 eigenspaces of the attached involution.
#[derive(Debug, Clone)]
pub struct SymSkewSplit {
    pub sym: SubmoduleBasis,
    pub skew: SubmoduleBasis,
}

pub fn skew_sym_split(algebra: &StructureAlgebra) -> Result<SymSkewSplit> {
    let ring = algebra.ring();
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    if !ring.two_invertible() {
        return Err(Error::TwoNotInvertible);
    }
    let sigma = algebra
        .involution()
        .ok_or_else(|| Error::InvalidInput("algebra has no involution attached".into()))?;
    let n = algebra.rank();
    let eigen = |sign: i64| -> Result<Vec<Vec<Scalar>>> {
        // sigma(x) = sign * x  <=>  sum_i x_i M[i][k] - sign x_k = 0
        let mut system = vec![vec![ring.zero(); n]; n];
        for k in 0..n {
            for i in 0..n {
                system[k][i] = sigma[i][k].clone();
            }
            system[k][k] = system[k][k].sub(&ring.from_i64(sign));
        }
        linalg::kernel_basis(ring, &system)
    };
    let sym = SubmoduleBasis { role: SubmoduleRole::Sym, vectors: eigen(1)? };
    let skew = SubmoduleBasis { role: SubmoduleRole::Skew, vectors: eigen(-1)? };
    Ok(SymSkewSplit { sym, skew })
}

/// `{x : n(x, d) = 0 for all d in the given span}`; requires the norm
/// polarization restricted to the span to be invertible.
pub fn orthogonal_complement(
    algebra: &StructureAlgebra,
    d_basis: &[Vec<Scalar>],
) -> Result<SubmoduleBasis> {
    let ring = algebra.ring();
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    let norm = algebra
        .norm()
        .ok_or_else(|| Error::InvalidInput("algebra has no norm attached".into()))?;
    let k = d_basis.len();
    let mut restriction = vec![vec![ring.zero(); k]; k];
    for (r, dr) in d_basis.iter().enumerate() {
        for (t, dt) in d_basis.iter().enumerate() {
            restriction[r][t] = norm.eval_polar(dr, dt);
        }
    }
    if !linalg::is_invertible(ring, &restriction)? {
        return Err(Error::DegenerateRestriction);
    }
    let n = algebra.rank();
    let rows: Vec<Vec<Scalar>> = d_basis
        .iter()
        .map(|d| {
            (0..n)
                .map(|kk| {
                    let mut acc = ring.zero();
                    for (i, di) in d.iter().enumerate() {
                        if !di.is_zero() {
                            acc = acc.add(&di.mul(&norm.polar[i][kk]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let vectors = linalg::kernel_basis(ring, &rows)?;
    Ok(SubmoduleBasis { role: SubmoduleRole::OrthoComplement, vectors })
}

/// Expresses `v` in the span of `rows`; `None` when outside.
fn in_span(ring: &Ring, rows: &[Vec<Scalar>], v: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let n = v.len();
    let mut columns = vec![vec![ring.zero(); rows.len()]; n];
    for (j, row) in rows.iter().enumerate() {
        for (i, s) in row.iter().enumerate() {
            columns[i][j] = s.clone();
        }
    }
    linalg::solve(ring, &columns, v)
}

/// Flexibility criterion for `(D, F, h, x)` with hermitian `h`:
/// `n_A(u x v, u) = 0` and `(u x v) x u = u x (v x u)` formally.
pub fn lemma2_flexible_criterion(h: &SesquilinearForm, cross: &CrossProduct) -> Result<bool> {
    if !is_hermitian(h) {
        return Err(Error::InvalidInput("criterion requires a hermitian form".into()));
    }
    let (u, v) = generic_module_pair(h);
    let w = cross.apply(&u, &v);
    // n_A(u x v, u) = t_D(h(u x v, u))
    let cond1 = h.module().coeff().trace_of(&h.eval(&w, &u)).is_zero();
    let lhs = cross.apply(&w, &u);
    let rhs = cross.apply(&u, &cross.apply(&v, &u));
    let cond2 = lhs.iter().zip(rhs.iter()).all(|(a, b)| a.sub(b).is_zero());
    Ok(cond1 && cond2)
}

/// Alternativity criterion for `(D, F, h, x)` with hermitian `h`:
/// `h(u, u x v) = 0` and `u x (u x v) = u h(u,v) - v h(u,u)` formally.
///
/// The same pair with the roles of `u` and `v` exchanged
/// (`h(v, u x v) = 0` and `(u x v) x v = v h(v,u) - u h(v,v)`) is computed
/// as well; the two verdicts are required to agree.
pub fn lemma2_alternative_criterion(h: &SesquilinearForm, cross: &CrossProduct) -> Result<bool> {
    if !is_hermitian(h) {
        return Err(Error::InvalidInput("criterion requires a hermitian form".into()));
    }
    let module = h.module();
    let (u, v) = generic_module_pair(h);
    let w = cross.apply(&u, &v);

    let primary = {
        let cond1 = h.eval(&u, &w).iter().all(MultiPoly::is_zero);
        let lhs = cross.apply(&u, &w);
        let h_uv = h.eval(&u, &v);
        let h_uu = h.eval(&u, &u);
        let rhs: Vec<MultiPoly> = module
            .act(&u, &h_uv)
            .iter()
            .zip(module.act(&v, &h_uu).iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        let cond2 = lhs.iter().zip(rhs.iter()).all(|(a, b)| a.sub(b).is_zero());
        cond1 && cond2
    };
    let exchanged = {
        let cond1 = h.eval(&v, &w).iter().all(MultiPoly::is_zero);
        let lhs = cross.apply(&w, &v);
        let h_vu = h.eval(&v, &u);
        let h_vv = h.eval(&v, &v);
        let rhs: Vec<MultiPoly> = module
            .act(&v, &h_vu)
            .iter()
            .zip(module.act(&u, &h_vv).iter())
            .map(|(a, b)| a.sub(b))
            .collect();
        let cond2 = lhs.iter().zip(rhs.iter()).all(|(a, b)| a.sub(b).is_zero());
        cond1 && cond2
    };
    if primary != exchanged {
        return Err(Error::InternalInconsistency(
            "exchanged alternativity conditions disagree".into(),
        ));
    }
    Ok(primary)
}

fn generic_module_pair(h: &SesquilinearForm) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
    let ring = h.module().ring();
    let m = h.module().r_rank();
    let u = (0..m).map(|i| MultiPoly::variable(ring, &format!("u{i}"))).collect();
    let v = (0..m).map(|i| MultiPoly::variable(ring, &format!("v{i}"))).collect();
    (u, v)
}

/// Whether the trace form `t(x, y) = t_A(x y)` is associative:
/// `t((x y) z) = t(x (y z))` formally.
pub fn check_trace_form_associative(algebra: &StructureAlgebra) -> Result<bool> {
    if !algebra.ring().two_invertible() {
        return Err(Error::TwoNotInvertible);
    }
    let trace = algebra
        .trace()
        .ok_or_else(|| Error::InvalidInput("algebra has no trace attached".into()))?;
    let x = algebra.generic_element("x");
    let y = algebra.generic_element("y");
    let z = algebra.generic_element("z");
    let apply_trace = |v: &[MultiPoly]| -> MultiPoly {
        let mut acc = MultiPoly::zero(algebra.ring());
        for (p, t) in v.iter().zip(trace.iter()) {
            if !t.is_zero() {
                acc = acc.add(&p.scale(t));
            }
        }
        acc
    };
    let xy = algebra.mul_vec(x.coords(), y.coords());
    let yz = algebra.mul_vec(y.coords(), z.coords());
    let lhs = apply_trace(&algebra.mul_vec(&xy, z.coords()));
    let rhs = apply_trace(&algebra.mul_vec(x.coords(), &yz));
    Ok(lhs.sub(&rhs).is_zero())
}

/// Verification report of the orthogonal decomposition.
#[derive(Debug, Clone)]
pub struct Lemma3Report {
    /// The projected cross product is alternating on basis pairs.
    pub cross_alternating: bool,
    /// `n_A(u, v) = t_D(h(u, v))` on all complement basis pairs.
    pub polar_matches_trace: bool,
    /// `h(u, v) = conj(h(v, u))` on all complement basis pairs.
    pub hermitian: bool,
    /// The complement carries a free right module structure over the span.
    pub free_module: bool,
    /// Entry-wise equality of the rebuilt algebra, when the module is free.
    pub rebuild_equal: Option<bool>,
}

/// Output of [`lemma3_decompose`].
#[derive(Debug, Clone)]
pub struct Lemma3Decomposition {
    /// The given span as a coefficient algebra.
    pub sub: CoefficientAlgebra,
    /// Basis of the orthogonal complement `F`.
    pub complement: SubmoduleBasis,
    /// `h(u_r, u_t) = -proj_D(u_t u_r)` in subalgebra coordinates.
    pub h_table: Vec<Vec<Vec<Scalar>>>,
    /// `x(u_r, u_t) = proj_F(u_t u_r)` as a tensor on the complement basis.
    pub cross: CrossProduct,
    /// Recovered form over the subalgebra, when the complement is free.
    pub form: Option<SesquilinearForm>,
    /// Adapted basis (subalgebra basis, then module-aligned complement).
    pub adapted_basis: Option<Vec<Vec<Scalar>>>,
    /// The rebuilt unified algebra in the adapted basis, when free.
    pub rebuilt: Option<StructureAlgebra>,
    pub report: Lemma3Report,
}

/// Decomposes a quadratic algebra with scalar involution along a composition
/// subalgebra of rank 2 or 4: `F` is the orthogonal complement, `-h` and `x`
/// are the projections of the multiplication `v u` onto the span and onto
/// `F`. When `F` is closed under the right action of the span and free, the
/// unified algebra is rebuilt and compared entry-wise.
pub fn lemma3_decompose(
    algebra: &StructureAlgebra,
    d_basis: &[Vec<Scalar>],
) -> Result<Lemma3Decomposition> {
    let ring = algebra.ring().clone();
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    if !ring.two_invertible() {
        return Err(Error::TwoNotInvertible);
    }
    let k = d_basis.len();
    if k != 2 && k != 4 {
        return Err(Error::InvalidInput("subalgebra basis must have rank 2 or 4".into()));
    }
    let n = algebra.rank();
    if d_basis.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidInput("basis vector length mismatch".into()));
    }
    if linalg::rank(&ring, &d_basis.to_vec())? != k {
        return Err(Error::NotASubalgebra);
    }

    // the span must contain the unit and close under product and involution
    let express_sub = |v: &[Scalar]| -> Result<Option<Vec<Scalar>>> { in_span(&ring, d_basis, v) };
    let unit_in = express_sub(algebra.unit())?.ok_or(Error::NotASubalgebra)?;
    let mut sub_mul = vec![vec![Vec::new(); k]; k];
    for a in 0..k {
        for b in 0..k {
            let prod = algebra.mul_vec(&d_basis[a], &d_basis[b]);
            sub_mul[a][b] = express_sub(&prod)?.ok_or(Error::NotASubalgebra)?;
        }
    }
    let mut sub_sigma = Vec::with_capacity(k);
    for row in d_basis {
        let image = algebra.apply_involution(row)?;
        sub_sigma.push(express_sub(&image)?.ok_or(Error::NotASubalgebra)?);
    }
    let sub_alg = StructureAlgebra::new(ring.clone(), unit_in, sub_mul)?
        .with_involution(sub_sigma)?;
    let sub = CoefficientAlgebra::new(sub_alg).map_err(|_| Error::NotASubalgebra)?;

    let complement = orthogonal_complement(algebra, d_basis)?;
    let m = complement.dimension();
    let f_basis = complement.vectors.clone();

    // combined basis for projections
    let mut combined = d_basis.to_vec();
    combined.extend(f_basis.iter().cloned());
    let project = |v: &[Scalar]| -> Result<(Vec<Scalar>, Vec<Scalar>)> {
        let coeffs = in_span(&ring, &combined, v)?.ok_or_else(|| {
            Error::InternalInconsistency("span + complement do not cover the algebra".into())
        })?;
        Ok((coeffs[..k].to_vec(), coeffs[k..].to_vec()))
    };

    let mut h_table = vec![vec![Vec::new(); m]; m];
    let mut x_tensor = vec![vec![vec![ring.zero(); m]; m]; m];
    for r in 0..m {
        for t in 0..m {
            // v u with (u, v) = (u_r, u_t): h(u_r, u_t) = -proj_D, x = proj_F
            let prod = algebra.mul_vec(&f_basis[t], &f_basis[r]);
            let (d_part, f_part) = project(&prod)?;
            h_table[r][t] = d_part.iter().map(Scalar::neg).collect();
            x_tensor[r][t] = f_part;
        }
    }

    let cross_alternating = (0..m).all(|r| x_tensor[r][r].iter().all(Scalar::is_zero))
        && (0..m).all(|r| {
            (0..m).all(|t| {
                (0..m).all(|kk| x_tensor[r][t][kk] == x_tensor[t][r][kk].neg())
            })
        });
    let norm = algebra
        .norm()
        .ok_or_else(|| Error::InvalidInput("algebra has no norm attached".into()))?;
    let mut polar_matches_trace = true;
    let mut hermitian = true;
    for r in 0..m {
        for t in 0..m {
            let lhs = norm.eval_polar(&f_basis[r], &f_basis[t]);
            if lhs != sub.trace_of(&h_table[r][t]) {
                polar_matches_trace = false;
            }
            if h_table[r][t] != sub.conj(&h_table[t][r]) {
                hermitian = false;
            }
        }
    }
    let cross = CrossProduct::new(ring.clone(), x_tensor).map_err(|_| {
        Error::InternalInconsistency("projected cross product is not alternating".into())
    });
    // a non-alternating projection is reported, not fatal
    let cross = match cross {
        Ok(c) => c,
        Err(_) => CrossProduct::zero(&ring, m),
    };

    // attempt a free right module structure: blocks g, g e_1, ..., g e_{k-1}
    // under the action u . d := d u (left multiplication in A)
    let mut free_module = m % k == 0;
    let mut generators: Vec<Vec<Scalar>> = Vec::new();
    let mut adapted_f: Vec<Vec<Scalar>> = Vec::new();
    if free_module {
        'outer: for cand in &f_basis {
            if adapted_f.len() == m {
                break;
            }
            // skip candidates already covered
            if !adapted_f.is_empty() && in_span(&ring, &adapted_f, cand)?.is_some() {
                continue;
            }
            let mut block = Vec::with_capacity(k);
            for a in 0..k {
                let acted = algebra.mul_vec(&d_basis[a], cand);
                // the action must stay inside F
                if in_span(&ring, &f_basis, &acted)?.is_none() {
                    free_module = false;
                    break 'outer;
                }
                block.push(acted);
            }
            let mut extended = adapted_f.clone();
            extended.extend(block.iter().cloned());
            if linalg::rank(&ring, &extended)? != extended.len() {
                free_module = false;
                break;
            }
            generators.push(cand.clone());
            adapted_f = extended;
        }
        if adapted_f.len() != m {
            free_module = false;
        }
    }
    if free_module {
        // module axioms (u a) b = u (a b), i.e. b (a g) = (a b) g in A
        'axioms: for g in &generators {
            for a in 0..k {
                for b in 0..k {
                    let lhs = algebra.mul_vec(
                        &d_basis[b],
                        &algebra.mul_vec(&d_basis[a], g),
                    );
                    let ab = algebra.mul_vec(&d_basis[a], &d_basis[b]);
                    let rhs = algebra.mul_vec(&ab, g);
                    if lhs != rhs {
                        free_module = false;
                        break 'axioms;
                    }
                }
            }
        }
    }

    let mut form = None;
    let mut adapted_basis = None;
    let mut rebuilt = None;
    let mut rebuild_equal = None;
    if free_module {
        let s = m / k;
        let module = FreeRightModule::new(sub.clone(), s)?;
        // h(g_a, g_b) = -proj_D(g_b g_a)
        let mut gram = vec![vec![Vec::new(); s]; s];
        for a in 0..s {
            for b in 0..s {
                let prod = algebra.mul_vec(&generators[b], &generators[a]);
                let (d_part, _) = project(&prod)?;
                gram[a][b] = d_part.iter().map(Scalar::neg).collect();
            }
        }
        let h = SesquilinearForm::new(module, gram)?;

        let mut adapted = d_basis.to_vec();
        adapted.extend(adapted_f.iter().cloned());
        // cross tensor on the adapted complement basis
        let express_adapted_f = |v: &[Scalar]| -> Result<Option<Vec<Scalar>>> {
            in_span(&ring, &adapted, v).map(|o| o.map(|c| c[k..].to_vec()))
        };
        let mut tensor = vec![vec![vec![ring.zero(); m]; m]; m];
        for r in 0..m {
            for t in 0..m {
                let prod = algebra.mul_vec(&adapted_f[t], &adapted_f[r]);
                let (_, f_part) = {
                    let coeffs = in_span(&ring, &adapted, &prod)?.ok_or_else(|| {
                        Error::InternalInconsistency("adapted basis does not span".into())
                    })?;
                    (coeffs[..k].to_vec(), coeffs[k..].to_vec())
                };
                tensor[r][t] = f_part;
            }
        }
        let _ = express_adapted_f;
        let unified_cross = CrossProduct::new(ring.clone(), tensor).map_err(|_| {
            Error::InternalInconsistency("adapted cross product is not alternating".into())
        })?;
        let input = UnifiedInput::new(h.clone(), unified_cross)?;
        let rebuilt_alg = build_unified(&input)?;
        let transformed = algebra.change_of_basis(&adapted)?;
        rebuild_equal = Some(rebuilt_alg.mul_tensor() == transformed.mul_tensor());
        form = Some(h);
        adapted_basis = Some(adapted);
        rebuilt = Some(rebuilt_alg);
    }

    Ok(Lemma3Decomposition {
        sub,
        complement,
        h_table,
        cross,
        form,
        adapted_basis,
        rebuilt,
        report: Lemma3Report {
            cross_alternating,
            polar_matches_trace,
            hermitian,
            free_module,
            rebuild_equal,
        },
    })
}

/// Output of [`theorem1_extract`].
#[derive(Debug, Clone)]
pub struct Theorem1Extraction {
    /// Basis of the skew space `F`.
    pub skew: SubmoduleBasis,
    pub s: usize,
    /// `B(u, v) = n(u, v) / 2` restricted to `F`.
    pub b_gram: Vec<Vec<Scalar>>,
    /// Half-commutator cross product `u x v = (uv - vu)/2` on `F`.
    pub cross: CrossProduct,
    pub conditions_hold: bool,
    pub rebuild_equal: bool,
}

/// Recovers `(F, B, x)` from a composition algebra: `F` is the skew space of
/// the involution, `x` the half-commutator, `B` the half-polarization; the
/// two composition equations are checked and the unified algebra is rebuilt
/// and compared entry-wise in the adapted basis.
pub fn theorem1_extract(algebra: &StructureAlgebra) -> Result<Theorem1Extraction> {
    let ring = algebra.ring().clone();
    if !ring.is_field() {
        return Err(Error::FieldRequired);
    }
    if !ring.two_invertible() {
        return Err(Error::TwoNotInvertible);
    }
    let norm = algebra.norm().ok_or(Error::NotComposition)?.clone();
    let comp = check_composition(algebra, &norm)?;
    if !comp.multiplicative || !comp.nondegenerate {
        return Err(Error::NotComposition);
    }
    let split = skew_sym_split(algebra)?;
    let skew = split.skew;
    let n = algebra.rank();
    let s = skew.dimension();
    if s + 1 != n || ![1, 3, 7].contains(&s) {
        return Err(Error::InternalInconsistency(format!(
            "composition algebra with skew dimension {s} at rank {n}"
        )));
    }
    let mut adapted = vec![algebra.unit().to_vec()];
    adapted.extend(skew.vectors.iter().cloned());

    let half = ring.from_i64(2).inv().expect("2 invertible");
    // express commutators in the skew basis
    let mut tensor = vec![vec![vec![ring.zero(); s]; s]; s];
    for r in 0..s {
        for t in 0..s {
            let uv = algebra.mul_vec(&skew.vectors[r], &skew.vectors[t]);
            let vu = algebra.mul_vec(&skew.vectors[t], &skew.vectors[r]);
            let comm: Vec<Scalar> =
                uv.iter().zip(vu.iter()).map(|(a, b)| a.sub(b).mul(&half)).collect();
            let coeffs = in_span(&ring, &adapted, &comm)?.ok_or_else(|| {
                Error::InternalInconsistency("commutator escapes the adapted basis".into())
            })?;
            if !coeffs[0].is_zero() {
                return Err(Error::InternalInconsistency(
                    "half-commutator of skew elements has a unit component".into(),
                ));
            }
            tensor[r][t] = coeffs[1..].to_vec();
        }
    }
    let cross = CrossProduct::new(ring.clone(), tensor)?;
    let b_gram: Vec<Vec<Scalar>> = (0..s)
        .map(|r| {
            (0..s)
                .map(|t| norm.eval_polar(&skew.vectors[r], &skew.vectors[t]).mul(&half))
                .collect()
        })
        .collect();
    let conditions_hold = check_theorem1_conditions(&ring, &b_gram, &cross)?;

    // rebuild: the unified cross slot is swapped relative to u x v
    let module = FreeRightModule::new(CoefficientAlgebra::base(&ring), s)?;
    let h = SesquilinearForm::from_scalar_gram(module, &b_gram)?;
    let input = UnifiedInput::new(h, cross.swapped())?;
    let rebuilt = build_unified(&input)?;
    let transformed = algebra.change_of_basis(&adapted)?;
    let rebuild_equal = rebuilt.mul_tensor() == transformed.mul_tensor();

    Ok(Theorem1Extraction { skew, s, b_gram, cross, conditions_hold, rebuild_equal })
}

/// Outcome of the zero-divisor search.
#[derive(Debug, Clone, PartialEq)]
pub enum ZeroDivisorSearch {
    /// `x y = 0` with both factors nonzero; `y = sigma(x)`.
    Found { x: Vec<Scalar>, y: Vec<Scalar> },
    NotFound { proved_anisotropic: bool, exhausted: bool },
}

/// Searches for an isotropic vector of the attached norm and returns the
/// zero-divisor pair `(x, sigma(x))`. Over finite base fields the search is
/// an exhaustive scan capped by `budget` norm evaluations; over the
/// rationals the polarization is diagonalized and zero entries or
/// opposite-sign pairs with square ratio yield explicit vectors. Anisotropy
/// is only ever claimed after a completed exhaustive scan.
pub fn find_zero_divisors(algebra: &StructureAlgebra, budget: u64) -> Result<ZeroDivisorSearch> {
    let norm = algebra
        .norm()
        .ok_or_else(|| Error::InvalidInput("algebra has no norm attached".into()))?
        .clone();
    if algebra.involution().is_none() {
        return Err(Error::InvalidInput("algebra has no involution attached".into()));
    }
    let ring = algebra.ring().clone();
    let n = algebra.rank();

    let try_candidate = |coords: &[Scalar]| -> Result<Option<ZeroDivisorSearch>> {
        if coords.iter().all(Scalar::is_zero) || !norm.eval(&coords.to_vec()).is_zero() {
            return Ok(None);
        }
        let y = algebra.apply_involution(&coords.to_vec())?;
        if y.iter().all(Scalar::is_zero) {
            return Ok(None);
        }
        let product = algebra.mul_vec(&coords.to_vec(), &y);
        if product.iter().all(Scalar::is_zero) {
            Ok(Some(ZeroDivisorSearch::Found { x: coords.to_vec(), y }))
        } else {
            Ok(None)
        }
    };

    if let Some(q) = ring.cardinality() {
        // odometer scan over all coordinate vectors
        let total = (q as u128).checked_pow(n as u32);
        let cap = total.map_or(budget as u128, |t| t.min(budget as u128));
        let exhaustive = total.is_some_and(|t| t <= budget as u128);
        let mut digits = vec![0u64; n];
        let mut visited: u128 = 0;
        loop {
            if visited >= cap {
                break;
            }
            visited += 1;
            let coords: Vec<Scalar> = digits.iter().map(|&d| ring.element(d)).collect();
            if let Some(found) = try_candidate(&coords)? {
                return Ok(found);
            }
            // increment
            let mut pos = 0;
            loop {
                if pos == n {
                    break;
                }
                digits[pos] += 1;
                if digits[pos] < q {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
            if pos == n {
                break;
            }
        }
        return Ok(ZeroDivisorSearch::NotFound {
            proved_anisotropic: exhaustive,
            exhausted: exhaustive,
        });
    }

    // infinite base: diagonalize and look for explicit isotropic vectors
    let (is_integers, field) = match ring {
        Ring::Integers => (true, Ring::Rationals),
        ref other if other.is_field() && other.two_invertible() => (false, other.clone()),
        _ => return Ok(ZeroDivisorSearch::NotFound { proved_anisotropic: false, exhausted: false }),
    };
    let to_field = |s: &Scalar| -> Scalar {
        if is_integers {
            s.into_rationals().expect("integer scalar lifts to Q")
        } else {
            s.clone()
        }
    };
    let polar: Vec<Vec<Scalar>> = norm
        .polar
        .iter()
        .map(|row| row.iter().map(to_field).collect())
        .collect();
    let (basis, diag) = diagonalize_symmetric(&field, &polar);
    let half = field.from_i64(2).inv().expect("2 invertible");
    let values: Vec<Scalar> = diag.iter().map(|d| d.mul(&half)).collect();

    let lift_vector = |v: &[Scalar]| -> Result<Option<ZeroDivisorSearch>> {
        let coords: Vec<Scalar> = if is_integers {
            clear_denominators(v)
                .iter()
                .map(|c| c.into_integers().expect("denominators cleared"))
                .collect()
        } else {
            v.to_vec()
        };
        try_candidate(&coords)
    };

    for (i, value) in values.iter().enumerate() {
        if value.is_zero() {
            if let Some(found) = lift_vector(&basis[i])? {
                return Ok(found);
            }
        }
    }
    if field == Ring::Rationals {
        for i in 0..n {
            for j in (i + 1)..n {
                let (di, dj) = (&values[i], &values[j]);
                if di.is_zero() || dj.is_zero() {
                    continue;
                }
                if di.rational_sign() == dj.rational_sign() {
                    continue;
                }
                let ratio = dj.neg().mul(&di.inv().expect("nonzero"));
                if let Some(root) = ratio.rational_sqrt() {
                    // d_i r^2 + d_j = 0 with x = r T_i + T_j
                    let candidate: Vec<Scalar> = basis[i]
                        .iter()
                        .zip(basis[j].iter())
                        .map(|(a, b)| a.mul(&root).add(b))
                        .collect();
                    if let Some(found) = lift_vector(&candidate)? {
                        return Ok(found);
                    }
                }
            }
        }
    }
    Ok(ZeroDivisorSearch::NotFound { proved_anisotropic: false, exhausted: false })
}

fn clear_denominators(v: &[Scalar]) -> Vec<Scalar> {
    use num::Integer;
    let one = num::BigInt::from(1);
    let lcm = v.iter().fold(one.clone(), |acc, s| {
        let den = s.rational_parts().map(|(_, d)| d).unwrap_or_else(|| one.clone());
        acc.lcm(&den)
    });
    let factor = Ring::Rationals.from_bigint(&lcm);
    v.iter().map(|s| s.mul(&factor)).collect()
}

/// Symmetric congruence diagonalization over a field with 2 invertible:
/// returns (rows of the new basis, diagonal entries of `T M T^t`).
fn diagonalize_symmetric(ring: &Ring, matrix: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let n = matrix.len();
    let mut m: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut basis = linalg::identity(ring, n);
    for i in 0..n {
        if m[i][i].is_zero() {
            // bring a nonzero onto the diagonal
            if let Some(j) = ((i + 1)..n).find(|&j| !m[j][j].is_zero()) {
                m.swap(i, j);
                for row in m.iter_mut() {
                    row.swap(i, j);
                }
                basis.swap(i, j);
            } else if let Some(j) = ((i + 1)..n).find(|&j| !m[i][j].is_zero()) {
                // row/col addition: new diagonal is 2 m[i][j]
                for c in 0..n {
                    let add = m[j][c].clone();
                    m[i][c] = m[i][c].add(&add);
                }
                for r in 0..n {
                    let add = m[r][j].clone();
                    m[r][i] = m[r][i].add(&add);
                }
                let addj = basis[j].clone();
                for (b, a) in basis[i].iter_mut().zip(addj.iter()) {
                    *b = b.add(a);
                }
            } else {
                continue;
            }
        }
        if m[i][i].is_zero() {
            continue;
        }
        let pivot_inv = m[i][i].inv().expect("nonzero pivot");
        for j in (i + 1)..n {
            if m[j][i].is_zero() {
                continue;
            }
            let f = m[j][i].mul(&pivot_inv);
            for c in 0..n {
                let sub = f.mul(&m[i][c]);
                m[j][c] = m[j][c].sub(&sub);
            }
            for r in 0..n {
                let sub = f.mul(&m[r][i]);
                m[r][j] = m[r][j].sub(&sub);
            }
            let subi: Vec<Scalar> = basis[i].iter().map(|s| f.mul(s)).collect();
            for (b, s) in basis[j].iter_mut().zip(subi.iter()) {
                *b = b.sub(s);
            }
        }
    }
    let diag = (0..n).map(|i| m[i][i].clone()).collect();
    (basis, diag)
}

/// Comparison of the computed nucleus against the coefficient block of a
/// unified algebra (the first `d` coordinates). The nucleus is computed
/// unconditionally; a mismatch with the coefficient span is reported as a
/// flag, never asserted away.
#[derive(Debug, Clone)]
pub struct NucleusScenarioReport {
    pub nucleus: SubmoduleBasis,
    pub coefficient_dim: usize,
    /// Whether the nucleus equals the span of the coefficient block exactly.
    pub equals_coefficient_span: bool,
}

pub fn nucleus_vs_coefficient_span(
    algebra: &StructureAlgebra,
    coefficient_dim: usize,
) -> Result<NucleusScenarioReport> {
    let nuc = nucleus(algebra)?;
    let ring = algebra.ring();
    let span: Vec<Vec<Scalar>> = (0..coefficient_dim).map(|i| algebra.basis_coords(i)).collect();
    let mut equal = nuc.dimension() == coefficient_dim;
    if equal {
        for v in &nuc.vectors {
            if in_span(ring, &span, v)?.is_none() {
                equal = false;
                break;
            }
        }
    }
    Ok(NucleusScenarioReport {
        nucleus: nuc,
        coefficient_dim,
        equals_coefficient_span: equal,
    })
}

/// Composition-algebra classification by rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub rank: usize,
    pub label: CompositionLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompositionLabel {
    Base,
    Etale,
    Quaternion,
    Octonion,
}

impl CompositionLabel {
    pub fn name(&self) -> &'static str {
        match self {
            CompositionLabel::Base => "base",
            CompositionLabel::Etale => "etale",
            CompositionLabel::Quaternion => "quaternion",
            CompositionLabel::Octonion => "octonion",
        }
    }
}

/// Verifies composition (multiplicative and nondegenerate norm) and labels
/// the algebra by its rank.
pub fn classify_composition(algebra: &StructureAlgebra) -> Result<Classification> {
    if !algebra.ring().is_field() {
        return Err(Error::FieldRequired);
    }
    let sigma = algebra
        .involution()
        .ok_or_else(|| Error::InvalidInput("algebra has no involution attached".into()))?
        .clone();
    let norm = match algebra.norm() {
        Some(n) => n.clone(),
        None => {
            let check = check_scalar_involution(algebra, &sigma)?;
            if !check.ok {
                return Err(Error::NotComposition);
            }
            check.norm.unwrap()
        }
    };
    let comp = check_composition(algebra, &norm)?;
    if !comp.multiplicative || !comp.nondegenerate {
        return Err(Error::NotComposition);
    }
    let label = match algebra.rank() {
        1 => CompositionLabel::Base,
        2 => CompositionLabel::Etale,
        4 => CompositionLabel::Quaternion,
        8 => CompositionLabel::Octonion,
        r => {
            return Err(Error::InternalInconsistency(format!(
                "composition algebra of rank {r}"
            )))
        }
    };
    Ok(Classification { rank: algebra.rank(), label })
}

/// Convenience: the colour identity `((u x v) x v) x v = -n(v) (u x v)` that
/// holds in the hat algebra of an alternative input, checked formally.
pub fn colour_identity_holds(h: &SesquilinearForm, cross: &CrossProduct) -> Result<bool> {
    let (u, v) = generic_module_pair(h);
    let w = cross.apply(&u, &v);
    let lhs = cross.apply(&cross.apply(&w, &v), &v);
    // n_A((0, v)) = h(v, v) as a base-ring polynomial
    let coeff = h.module().coeff();
    let nv = coeff
        .r_multiple_of(&h.eval(&v, &v))?
        .ok_or_else(|| Error::InvalidInput("h(v,v) is not scalar".into()))?;
    let ok = lhs
        .iter()
        .zip(w.iter())
        .all(|(l, wk)| l.add(&nv.mul(wk)).is_zero());
    Ok(ok)
}
