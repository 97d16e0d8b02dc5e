//! Builders for the unified construction and its named special cases.
//!
//! The unified multiplication on `A = D + F` is
//!
//! ```text
//! (a, u)(b, v) = (a b - h(v, u),  v a + u conj(b) + x(v, u))
//! ```
//!
//! where `x` is the cross-product tensor handed to the builder (note the
//! operand order in the cross term). Every specialized builder derives its
//! cross product, including its sign, so that its output feeds this one
//! formula; the classical displays of the special cases are recovered in the
//! tests by expanding them independently.

use crate::algebra::{
    check_scalar_involution, Coeff, NormForm, StructureAlgebra,
};
use crate::error::{Error, Result};
use crate::forms::{
    alpha_cross, is_hermitian, is_nondegenerate, wedge_cross, CoefficientAlgebra, CrossProduct,
    DeterminantTrivialization, FreeRightModule, SesquilinearForm,
};
use crate::ring::{Ring, Scalar};

/// The data `(D, F, h, x)` consumed by [`build_unified`].
#[derive(Debug, Clone)]
pub struct UnifiedInput {
    h: SesquilinearForm,
    cross: CrossProduct,
}

impl UnifiedInput {
    pub fn new(h: SesquilinearForm, cross: CrossProduct) -> Result<UnifiedInput> {
        if cross.r_rank() != h.module().r_rank() {
            return Err(Error::InvalidInput("cross product rank mismatch".into()));
        }
        if cross.ring() != h.module().ring() {
            return Err(Error::RingMismatch(
                h.module().ring().to_string(),
                cross.ring().to_string(),
            ));
        }
        Ok(UnifiedInput { h, cross })
    }

    pub fn coeff(&self) -> &CoefficientAlgebra {
        self.h.module().coeff()
    }

    pub fn module(&self) -> &FreeRightModule {
        self.h.module()
    }

    pub fn form(&self) -> &SesquilinearForm {
        &self.h
    }

    pub fn cross(&self) -> &CrossProduct {
        &self.cross
    }
}

/// Assembles `A = (D, F, h, x)` with the involution `(a, u) -> (conj(a), -u)`
/// attached; when `h` is hermitian the norm `n((a, u)) = n_D(a) + h(u, u)`
/// and trace `t((a, u)) = t_D(a)` are attached as well.
pub fn build_unified(input: &UnifiedInput) -> Result<StructureAlgebra> {
    let coeff = input.coeff();
    let module = input.module();
    let h = input.form();
    let cross = input.cross();
    let ring = coeff.ring().clone();
    let d = coeff.rank();
    let m = module.r_rank();
    let n = d + m;
    let d_alg = coeff.algebra();

    let mut mul = vec![vec![vec![ring.zero(); n]; n]; n];
    let set_d = |slot: &mut Vec<Scalar>, value: &[Scalar]| {
        slot[..d].clone_from_slice(value);
    };
    // D-basis times D-basis
    for a in 0..d {
        for b in 0..d {
            set_d(&mut mul[a][b], &d_alg.mul_tensor()[a][b]);
        }
    }
    for r in 0..m {
        let fr = basis_flat(module, r);
        // (e_a, 0)(0, F_r) = (0, F_r . e_a)
        for a in 0..d {
            let acted = module.act(&fr, &d_alg.basis_coords(a));
            mul[a][d + r][d..].clone_from_slice(&acted);
        }
        // (0, F_r)(e_b, 0) = (0, F_r . conj(e_b))
        for b in 0..d {
            let acted = module.act(&fr, &coeff.conj(&d_alg.basis_coords(b)));
            mul[d + r][b][d..].clone_from_slice(&acted);
        }
        // (0, F_r)(0, F_t) = (-h(F_t, F_r), x(F_t, F_r))
        for t in 0..m {
            let ft = basis_flat(module, t);
            let h_val = h.eval(&ft, &fr);
            let neg_h: Vec<Scalar> = h_val.iter().map(Scalar::neg).collect();
            mul[d + r][d + t][..d].clone_from_slice(&neg_h);
            let x_val = cross.apply(&ft, &fr);
            mul[d + r][d + t][d..].clone_from_slice(&x_val);
        }
    }

    let mut unit = vec![ring.zero(); n];
    unit[..d].clone_from_slice(d_alg.unit());
    let algebra = StructureAlgebra::new(ring.clone(), unit, mul)?;

    // sigma(a, u) = (conj(a), -u)
    let mut sigma = vec![vec![ring.zero(); n]; n];
    let d_sigma = d_alg.involution().expect("coefficient algebra has an involution");
    for a in 0..d {
        sigma[a][..d].clone_from_slice(&d_sigma[a]);
    }
    for r in 0..m {
        sigma[d + r][d + r] = ring.from_i64(-1);
    }
    let mut algebra = algebra.with_involution(sigma)?;

    if is_hermitian(h) {
        let d_norm = d_alg.norm().expect("coefficient algebra has a norm");
        let mut diag = Vec::with_capacity(n);
        diag.extend(d_norm.diag.iter().cloned());
        for r in 0..m {
            let fr = basis_flat(module, r);
            let value = h.eval(&fr, &fr);
            let lambda = coeff.r_multiple_of(&value)?.ok_or_else(|| {
                Error::InternalInconsistency("h(u,u) of a hermitian form escapes R*1".into())
            })?;
            diag.push(lambda);
        }
        let mut polar = vec![vec![ring.zero(); n]; n];
        for a in 0..d {
            polar[a][..d].clone_from_slice(&d_norm.polar[a]);
        }
        for r in 0..m {
            let fr = basis_flat(module, r);
            for t in 0..m {
                let ft = basis_flat(module, t);
                polar[d + r][d + t] = coeff.trace_of(&h.eval(&fr, &ft));
            }
        }
        algebra = algebra.with_norm(NormForm::new(diag, polar)?)?;

        let d_trace = d_alg.trace().expect("coefficient algebra has a trace");
        let mut trace = vec![ring.zero(); n];
        trace[..d].clone_from_slice(d_trace);
        algebra = algebra.with_trace(trace)?;
    }
    Ok(algebra)
}

fn basis_flat(module: &FreeRightModule, flat: usize) -> Vec<Scalar> {
    let d = module.coeff().rank();
    module.basis_vector(flat / d, flat % d)
}

/// The doubling `Cay(D, mu)` on `D + D`, assembled directly from the display
///
/// ```text
/// (u, w)(u', w') = (u u' + mu conj(w') w,  w' u + w conj(u'))
/// ```
///
/// with norm `n_D(u) - mu n_D(w)`. This is an independent code path from
/// [`build_unified`]; the coincidence of the two is a tested identity.
pub fn cayley_dickson(coeff: &CoefficientAlgebra, mu: &Scalar) -> Result<StructureAlgebra> {
    if mu.ring() != coeff.ring() {
        return Err(Error::RingMismatch(coeff.ring().to_string(), mu.ring().to_string()));
    }
    if !mu.is_invertible() {
        return Err(Error::NonInvertible);
    }
    if coeff.rank() > 4 {
        return Err(Error::InvalidInput("doubling requires rank at most 4".into()));
    }
    let ring = coeff.ring().clone();
    let d_alg = coeff.algebra();
    let d = coeff.rank();
    let n = 2 * d;

    let mut mul = vec![vec![vec![ring.zero(); n]; n]; n];
    for a in 0..d {
        let ea = d_alg.basis_coords(a);
        for b in 0..d {
            let eb = d_alg.basis_coords(b);
            // (e_a, 0)(e_b, 0)
            mul[a][b][..d].clone_from_slice(&d_alg.mul_tensor()[a][b]);
            // (e_a, 0)(0, e_b) = (0, e_b e_a)
            mul[a][d + b][d..].clone_from_slice(&coeff.mul(&eb, &ea));
            // (0, e_a)(e_b, 0) = (0, e_a conj(e_b))
            mul[d + a][b][d..].clone_from_slice(&coeff.mul(&ea, &coeff.conj(&eb)));
            // (0, e_a)(0, e_b) = (mu conj(e_b) e_a, 0)
            let prod = coeff.mul(&coeff.conj(&eb), &ea);
            let scaled: Vec<Scalar> = prod.iter().map(|s| s.mul(mu)).collect();
            mul[d + a][b + d][..d].clone_from_slice(&scaled);
        }
    }
    let mut unit = vec![ring.zero(); n];
    unit[..d].clone_from_slice(d_alg.unit());
    let algebra = StructureAlgebra::new(ring.clone(), unit, mul)?;

    let mut sigma = vec![vec![ring.zero(); n]; n];
    let d_sigma = d_alg.involution().expect("involution present");
    for a in 0..d {
        sigma[a][..d].clone_from_slice(&d_sigma[a]);
        sigma[d + a][d + a] = ring.from_i64(-1);
    }
    let algebra = algebra.with_involution(sigma)?;

    let d_norm = d_alg.norm().expect("norm present");
    let neg_mu = mu.neg();
    let mut diag: Vec<Scalar> = d_norm.diag.clone();
    diag.extend(d_norm.diag.iter().map(|s| s.mul(&neg_mu)));
    let mut polar = vec![vec![ring.zero(); n]; n];
    for a in 0..d {
        for b in 0..d {
            polar[a][b] = d_norm.polar[a][b].clone();
            polar[d + a][d + b] = d_norm.polar[a][b].mul(&neg_mu);
        }
    }
    let algebra = algebra.with_norm(NormForm::new(diag, polar)?)?;

    let mut trace = vec![ring.zero(); n];
    trace[..d].clone_from_slice(d_alg.trace().expect("trace present"));
    algebra.with_trace(trace)
}

/// The unified input of the ternary-hermitian octonion construction.
pub fn thakur_input(
    h: &SesquilinearForm,
    alpha: &DeterminantTrivialization,
) -> Result<UnifiedInput> {
    let coeff = h.module().coeff();
    if coeff.rank() != 2 || !coeff.is_commutative() {
        return Err(Error::InvalidInput("thakur requires a quadratic etale coefficient".into()));
    }
    if h.module().d_rank() != 3 {
        return Err(Error::InvalidInput("thakur requires a rank-3 module".into()));
    }
    if !is_hermitian(h) {
        return Err(Error::InvalidInput("thakur requires a hermitian form".into()));
    }
    if !is_nondegenerate(h)? {
        return Err(Error::DegenerateForm);
    }
    let cross = alpha_cross(h, alpha)?;
    UnifiedInput::new(h.clone(), cross)
}

/// Octonion construction from a ternary hermitian form over a quadratic
/// etale algebra: `build_unified` fed with the cross product solved from
/// `h(u x v, w) = alpha det[u|v|w]`.
pub fn thakur(
    h: &SesquilinearForm,
    alpha: &DeterminantTrivialization,
) -> Result<StructureAlgebra> {
    build_unified(&thakur_input(h, alpha)?)
}

/// Quaternion algebra from a rank-3 module with a nondegenerate quadratic
/// form of trivial determinant: `build_unified(R, F, B, x)` with `B` the
/// bilinear form of `N` and the wedge cross product.
pub fn quat(ring: &Ring, n_form: &NormForm, alpha: &Scalar) -> Result<StructureAlgebra> {
    build_unified(&quat_input(ring, n_form, alpha)?)
}

/// The unified input of the quaternion construction.
pub fn quat_input(ring: &Ring, n_form: &NormForm, alpha: &Scalar) -> Result<UnifiedInput> {
    if n_form.rank() != 3 {
        return Err(Error::InvalidInput("quat requires a rank-3 form".into()));
    }
    if !ring.two_invertible() {
        return Err(Error::TwoNotInvertible);
    }
    if !crate::linalg::is_invertible(ring, &n_form.polar)? {
        return Err(Error::DegenerateForm);
    }
    let cross = wedge_cross(ring, n_form, alpha)?;
    let half = ring.from_i64(2).inv().expect("2 invertible");
    let b: Vec<Vec<Scalar>> = n_form
        .polar
        .iter()
        .map(|row| row.iter().map(|s| s.mul(&half)).collect())
        .collect();
    let module = FreeRightModule::new(CoefficientAlgebra::base(ring), 3)?;
    let h = SesquilinearForm::from_scalar_gram(module, &b)?;
    UnifiedInput::new(h, cross)
}

/// Spin factor `JSpin(F, B) = (R, F, -B, 0)`.
pub fn jspin(ring: &Ring, b_gram: &[Vec<Scalar>]) -> Result<StructureAlgebra> {
    build_unified(&jspin_input(ring, b_gram)?)
}

/// The unified input of the spin factor.
pub fn jspin_input(ring: &Ring, b_gram: &[Vec<Scalar>]) -> Result<UnifiedInput> {
    let m = b_gram.len();
    if b_gram.iter().any(|row| row.len() != m) {
        return Err(Error::InvalidInput("B must be square".into()));
    }
    for i in 0..m {
        for j in 0..m {
            if b_gram[i][j] != b_gram[j][i] {
                return Err(Error::InvalidInput("B must be symmetric".into()));
            }
        }
    }
    let neg: Vec<Vec<Scalar>> =
        b_gram.iter().map(|row| row.iter().map(Scalar::neg).collect()).collect();
    let module = FreeRightModule::new(CoefficientAlgebra::base(ring), m)?;
    let h = SesquilinearForm::from_scalar_gram(module, &neg)?;
    UnifiedInput::new(h, CrossProduct::zero(ring, m))
}

/// The hat algebra of `(D, F, h, x)` with hermitian `h`: the base ring
/// replaces `D`, the form becomes `B = (h + conj h)/2` viewed over `R`, and
/// the cross product is reused on the underlying `R`-module.
pub fn hat(input: &UnifiedInput) -> Result<StructureAlgebra> {
    build_unified(&hat_input(input)?)
}

/// The unified input of the hat algebra.
pub fn hat_input(input: &UnifiedInput) -> Result<UnifiedInput> {
    let ring = input.coeff().ring().clone();
    if !ring.two_invertible() {
        return Err(Error::TwoNotInvertible);
    }
    if !is_hermitian(input.form()) {
        return Err(Error::InvalidInput("hat requires a hermitian form".into()));
    }
    let module = input.module();
    let m = module.r_rank();
    let half = ring.from_i64(2).inv().expect("2 invertible");
    let mut b = vec![vec![ring.zero(); m]; m];
    for r in 0..m {
        let fr = basis_flat(module, r);
        for t in 0..m {
            let ft = basis_flat(module, t);
            let traced = module.coeff().trace_of(&input.form().eval(&fr, &ft));
            b[r][t] = traced.mul(&half);
        }
    }
    let r_module = FreeRightModule::new(CoefficientAlgebra::base(&ring), m)?;
    let h = SesquilinearForm::from_scalar_gram(r_module, &b)?;
    UnifiedInput::new(h, input.cross().clone())
}

/// Bilinear products on an algebra for the doubling of [`becker_double`].
#[derive(Debug, Clone)]
pub struct BilinearProduct {
    tensor: Vec<Vec<Vec<Scalar>>>,
}

impl BilinearProduct {
    pub fn new(algebra: &StructureAlgebra, tensor: Vec<Vec<Vec<Scalar>>>) -> Result<BilinearProduct> {
        let n = algebra.rank();
        if tensor.len() != n
            || tensor.iter().any(|t| t.len() != n || t.iter().any(|row| row.len() != n))
        {
            return Err(Error::InvalidInput("bilinear product tensor shape mismatch".into()));
        }
        Ok(BilinearProduct { tensor })
    }

    pub fn zero(algebra: &StructureAlgebra) -> BilinearProduct {
        let n = algebra.rank();
        BilinearProduct { tensor: vec![vec![vec![algebra.ring().zero(); n]; n]; n] }
    }

    /// The algebra's own multiplication.
    pub fn mul(algebra: &StructureAlgebra) -> BilinearProduct {
        BilinearProduct { tensor: algebra.mul_tensor().clone() }
    }

    /// The multiplication scaled by a fixed factor.
    pub fn scaled_mul(algebra: &StructureAlgebra, factor: &Scalar) -> BilinearProduct {
        let tensor = algebra
            .mul_tensor()
            .iter()
            .map(|t| {
                t.iter()
                    .map(|row| row.iter().map(|s| s.mul(factor)).collect())
                    .collect()
            })
            .collect();
        BilinearProduct { tensor }
    }

    pub fn tensor(&self) -> &Vec<Vec<Vec<Scalar>>> {
        &self.tensor
    }

    pub fn apply<C: Coeff>(&self, ring: &Ring, x: &[C], y: &[C]) -> Vec<C> {
        let n = self.tensor.len();
        let mut out = vec![C::zero(ring); n];
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if y[j].is_zero() {
                    continue;
                }
                let prod = x[i].mul(&y[j]);
                for k in 0..n {
                    let c = &self.tensor[i][j][k];
                    if !c.is_zero() {
                        out[k] = out[k].add(&prod.scale(c));
                    }
                }
            }
        }
        out
    }
}

/// The doubling `C(A, dot1, dot2, dot3) = A + A` with multiplication
///
/// ```text
/// (a, b)(c, d) = (a c + dot1(conj(d), b),  dot2(d, a) + dot2(b, conj(c)) + dot3(b, d))
/// ```
///
/// and involution `(a, b) -> (conj(a), -b)`. Requires a verified scalar
/// involution on `A`; no validity analysis of the three products is
/// performed beyond bilinearity, so the output involution is re-checked and
/// norm and trace are only attached when it is scalar.
pub fn becker_double(
    algebra: &StructureAlgebra,
    dot1: &BilinearProduct,
    dot2: &BilinearProduct,
    dot3: &BilinearProduct,
) -> Result<StructureAlgebra> {
    let sigma_a = algebra
        .involution()
        .ok_or(Error::NotScalarInvolution)?
        .clone();
    let base_check = check_scalar_involution(algebra, &sigma_a)?;
    if !base_check.ok {
        return Err(Error::NotScalarInvolution);
    }
    let ring = algebra.ring().clone();
    let n = algebra.rank();
    let total = 2 * n;

    let conj = |x: &[Scalar]| algebra.apply_involution(&x.to_vec()).expect("involution present");
    let mut mul = vec![vec![vec![ring.zero(); total]; total]; total];
    for i in 0..n {
        let ei = algebra.basis_coords(i);
        for j in 0..n {
            let ej = algebra.basis_coords(j);
            // (e_i, 0)(e_j, 0) = (e_i e_j, 0)
            mul[i][j][..n].clone_from_slice(&algebra.mul_tensor()[i][j]);
            // (e_i, 0)(0, e_j) = (0, dot2(e_j, e_i))
            mul[i][n + j][n..].clone_from_slice(&dot2.apply(&ring, &ej, &ei));
            // (0, e_i)(e_j, 0) = (0, dot2(e_i, conj(e_j)))
            mul[n + i][j][n..].clone_from_slice(&dot2.apply(&ring, &ei, &conj(&ej)));
            // (0, e_i)(0, e_j) = (dot1(conj(e_j), e_i), dot3(e_i, e_j))
            mul[n + i][n + j][..n].clone_from_slice(&dot1.apply(&ring, &conj(&ej), &ei));
            mul[n + i][n + j][n..].clone_from_slice(&dot3.apply(&ring, &ei, &ej));
        }
    }
    let mut unit = vec![ring.zero(); total];
    unit[..n].clone_from_slice(algebra.unit());
    let doubled = StructureAlgebra::new(ring.clone(), unit, mul)?;

    let mut sigma = vec![vec![ring.zero(); total]; total];
    for i in 0..n {
        sigma[i][..n].clone_from_slice(&sigma_a[i]);
        sigma[n + i][n + i] = ring.from_i64(-1);
    }
    let doubled = doubled.with_involution(sigma.clone())?;

    // attach norm and trace only when the doubled involution is scalar
    let check = check_scalar_involution(&doubled, &sigma)?;
    if check.ok {
        let with_norm = doubled.with_norm(check.norm.unwrap())?;
        return with_norm.with_trace(check.trace.unwrap());
    }
    Ok(doubled)
}

/// The rank-2 algebra `R[w]/(w^2 - b)` with conjugation `w -> -w` and norm
/// `n(a + b w) = a^2 - b w^2`... explicitly `n(x + y w) = x^2 - b y^2`.
pub fn cay_rank2(ring: &Ring, b: &Scalar) -> Result<StructureAlgebra> {
    if b.ring() != ring {
        return Err(Error::RingMismatch(ring.to_string(), b.ring().to_string()));
    }
    let one = ring.one();
    let z = || ring.zero();
    let mul = vec![
        vec![vec![one.clone(), z()], vec![z(), one.clone()]],
        vec![vec![z(), one.clone()], vec![b.clone(), z()]],
    ];
    let algebra = StructureAlgebra::new(ring.clone(), vec![one.clone(), z()], mul)?;
    let algebra = algebra
        .with_involution(vec![vec![one.clone(), z()], vec![z(), ring.from_i64(-1)]])?;
    let neg_b = b.neg();
    let two = ring.from_i64(2);
    let norm = NormForm::new(
        vec![one, neg_b.clone()],
        vec![vec![two.clone(), z()], vec![z(), neg_b.mul(&two)]],
    )?;
    let algebra = algebra.with_norm(norm)?;
    algebra.with_trace(vec![two, z()])
}

/// The split quadratic etale algebra `R x R` in its idempotent basis
/// `{p, q}`, with the swap involution and norm `n(a p + b q) = a b`.
pub fn split_etale(ring: &Ring) -> Result<StructureAlgebra> {
    let one = ring.one();
    let z = || ring.zero();
    let mul = vec![
        vec![vec![one.clone(), z()], vec![z(), z()]],
        vec![vec![z(), z()], vec![z(), one.clone()]],
    ];
    let algebra = StructureAlgebra::new(ring.clone(), vec![one.clone(), one.clone()], mul)?;
    let algebra = algebra.with_involution(vec![vec![z(), one.clone()], vec![one.clone(), z()]])?;
    let norm = NormForm::new(
        vec![z(), z()],
        vec![vec![z(), one.clone()], vec![one.clone(), z()]],
    )?;
    let algebra = algebra.with_norm(norm)?;
    algebra.with_trace(vec![one.clone(), one])
}

/// Gaussian rank-2 coefficients `R[i]`, `i^2 = -1`.
pub fn gaussian_coefficients(ring: &Ring) -> CoefficientAlgebra {
    CoefficientAlgebra::new(cay_rank2(ring, &ring.from_i64(-1)).expect("rank-2 build"))
        .expect("gaussian etale coefficients")
}

/// Hamilton quaternion coefficients over `ring`: `Cay(Cay(R, -1), -1)`.
pub fn hamilton_coefficients(ring: &Ring) -> CoefficientAlgebra {
    let gauss = gaussian_coefficients(ring);
    let quaternions =
        cayley_dickson(&gauss, &ring.from_i64(-1)).expect("quaternion doubling");
    CoefficientAlgebra::new(quaternions).expect("quaternion coefficients")
}

/// Split etale coefficients over `ring`.
pub fn split_coefficients(ring: &Ring) -> CoefficientAlgebra {
    CoefficientAlgebra::new(split_etale(ring).expect("split etale build"))
        .expect("split etale coefficients")
}

/// The one-generator hermitian form `h(u, v) = conj(u) mu v` on `D` itself.
pub fn rank_one_scaled_form(coeff: &CoefficientAlgebra, mu: &[Scalar]) -> Result<SesquilinearForm> {
    let module = FreeRightModule::new(coeff.clone(), 1)?;
    SesquilinearForm::new(module, vec![vec![mu.to_vec()]])
}
