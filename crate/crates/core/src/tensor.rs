//! (1,1)-tensor fields on four-dimensional phase space, their Nijenhuis and
//! Haantjes torsions, spectra and characteristic co-distributions.

use num::BigRational;

use crate::error::{Error, Result};
use crate::exact::{Context, Scalar};
use crate::linalg;
use crate::phase::{omega_entry, OneForm, DIM, DOF};

/// A 4x4 matrix of scalars over one context.
#[derive(Clone, Debug)]
pub struct TensorField11 {
    ctx: Context,
    m: Vec<Vec<Scalar>>,
}

impl TensorField11 {
    pub fn zero(ctx: &Context) -> Self {
        TensorField11 {
            ctx: ctx.clone(),
            m: vec![vec![Scalar::zero(ctx); DIM]; DIM],
        }
    }

    pub fn identity(ctx: &Context) -> Self {
        let mut t = Self::zero(ctx);
        for i in 0..DIM {
            t.m[i][i] = Scalar::one(ctx);
        }
        t
    }

    pub fn from_rows(ctx: &Context, rows: Vec<Vec<Scalar>>) -> Self {
        assert_eq!(rows.len(), DIM);
        for r in &rows {
            assert_eq!(r.len(), DIM);
            for s in r {
                assert!(s.context().same(ctx), "context mismatch");
            }
        }
        TensorField11 {
            ctx: ctx.clone(),
            m: rows,
        }
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    pub fn entry(&self, i: usize, j: usize) -> &Scalar {
        &self.m[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert!(v.context().same(&self.ctx));
        self.m[i][j] = v;
    }

    pub fn rows(&self) -> &Vec<Vec<Scalar>> {
        &self.m
    }

    pub fn is_zero(&self) -> bool {
        self.m.iter().flatten().all(|s| s.is_zero())
    }

    pub fn add(&self, other: &TensorField11) -> TensorField11 {
        self.zip(other, |a, b| a.add_ref(b))
    }

    pub fn sub(&self, other: &TensorField11) -> TensorField11 {
        self.zip(other, |a, b| a.sub_ref(b))
    }

    fn zip<F: Fn(&Scalar, &Scalar) -> Scalar>(&self, other: &TensorField11, f: F) -> TensorField11 {
        assert!(self.ctx.same(&other.ctx));
        TensorField11 {
            ctx: self.ctx.clone(),
            m: (0..DIM)
                .map(|i| (0..DIM).map(|j| f(&self.m[i][j], &other.m[i][j])).collect())
                .collect(),
        }
    }

    /// Function-linear scaling (the Haantjes algebra is closed under it).
    pub fn scale(&self, s: &Scalar) -> TensorField11 {
        TensorField11 {
            ctx: self.ctx.clone(),
            m: self
                .m
                .iter()
                .map(|row| row.iter().map(|e| e.mul_ref(s)).collect())
                .collect(),
        }
    }

    pub fn scale_rat(&self, c: &BigRational) -> TensorField11 {
        TensorField11 {
            ctx: self.ctx.clone(),
            m: self
                .m
                .iter()
                .map(|row| row.iter().map(|e| e.scale(c)).collect())
                .collect(),
        }
    }

    /// Matrix product (composition of operators).
    pub fn mul(&self, other: &TensorField11) -> TensorField11 {
        assert!(self.ctx.same(&other.ctx));
        let mut out = Self::zero(&self.ctx);
        for i in 0..DIM {
            for j in 0..DIM {
                let mut acc = Scalar::zero(&self.ctx);
                for k in 0..DIM {
                    if !self.m[i][k].is_zero() && !other.m[k][j].is_zero() {
                        acc = acc.add_ref(&self.m[i][k].mul_ref(&other.m[k][j]));
                    }
                }
                out.m[i][j] = acc;
            }
        }
        out
    }

    pub fn transpose(&self) -> TensorField11 {
        TensorField11 {
            ctx: self.ctx.clone(),
            m: (0..DIM)
                .map(|i| (0..DIM).map(|j| self.m[j][i].clone()).collect())
                .collect(),
        }
    }

    pub fn trace(&self) -> Scalar {
        let mut acc = Scalar::zero(&self.ctx);
        for i in 0..DIM {
            acc = acc.add_ref(&self.m[i][i]);
        }
        acc
    }

    /// Apply the transpose to a 1-form: `(K^T alpha)_i = sum_j K_{ji} alpha_j`.
    pub fn transpose_apply(&self, alpha: &OneForm) -> OneForm {
        OneForm::new(std::array::from_fn(|i| {
            let mut acc = Scalar::zero(&self.ctx);
            for j in 0..DIM {
                if !self.m[j][i].is_zero() {
                    acc = acc.add_ref(&self.m[j][i].mul_ref(&alpha.coeffs[j]));
                }
            }
            acc
        }))
    }

    /// n x n position-space blocks of the symplectic splitting
    /// `K = [[A, B], [C, D]]`.
    pub fn block(&self, row_block: usize, col_block: usize) -> Vec<Vec<Scalar>> {
        (0..DOF)
            .map(|i| {
                (0..DOF)
                    .map(|j| self.m[row_block * DOF + i][col_block * DOF + j].clone())
                    .collect()
            })
            .collect()
    }

    pub fn b_block_is_zero(&self) -> bool {
        self.block(0, 1).iter().flatten().all(|s| s.is_zero())
    }

    pub fn lift(&self, target: &Context) -> Result<TensorField11> {
        let mut rows = Vec::with_capacity(DIM);
        for r in &self.m {
            let mut row = Vec::with_capacity(DIM);
            for e in r {
                row.push(e.lift(target)?);
            }
            rows.push(row);
        }
        Ok(TensorField11::from_rows(target, rows))
    }

    pub fn equals(&self, other: &TensorField11) -> bool {
        self.sub(other).is_zero()
    }

    pub fn determinant(&self) -> Scalar {
        det4(&self.ctx, &self.m)
    }

    /// Swap `q1 <-> q2` and `p1 <-> p2` simultaneously: conjugation by the
    /// permutation matrix of the involution together with substitution of
    /// the swapped variables into every entry.
    pub fn swap_involution(&self) -> TensorField11 {
        let perm = [1usize, 0, 3, 2];
        let swap_vars = |s: &Scalar| -> Scalar {
            let mut map = std::collections::BTreeMap::new();
            let ctx = &self.ctx;
            let v = |i: usize| {
                crate::exact::RationalFunction::from_poly(
                    crate::exact::Polynomial::var_idx(ctx, i),
                )
            };
            map.insert(0usize, v(1));
            map.insert(1usize, v(0));
            map.insert(2usize, v(3));
            map.insert(3usize, v(2));
            s.substitute(ctx, &map).expect("swap substitution")
        };
        let mut out = Self::zero(&self.ctx);
        for i in 0..DIM {
            for j in 0..DIM {
                out.m[perm[i]][perm[j]] = swap_vars(&self.m[i][j]);
            }
        }
        out
    }
}

/// Components `(i; j, k)`, antisymmetric in `(j, k)`.
#[derive(Clone, Debug)]
pub struct Torsion3Tensor {
    ctx: Context,
    comp: Vec<Vec<Vec<Scalar>>>,
}

impl Torsion3Tensor {
    fn new_filled(ctx: &Context, mut fill: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut comp = vec![vec![vec![Scalar::zero(ctx); DIM]; DIM]; DIM];
        for i in 0..DIM {
            for j in 0..DIM {
                for k in (j + 1)..DIM {
                    let v = fill(i, j, k);
                    comp[i][k][j] = v.neg_ref();
                    comp[i][j][k] = v;
                }
            }
        }
        Torsion3Tensor {
            ctx: ctx.clone(),
            comp,
        }
    }

    pub fn component(&self, i: usize, j: usize, k: usize) -> &Scalar {
        &self.comp[i][j][k]
    }

    pub fn is_zero(&self) -> bool {
        self.comp
            .iter()
            .flatten()
            .flatten()
            .all(|s| s.is_zero())
    }

    pub fn is_zero_mod<F>(&self, rewrite: F) -> bool
    where
        F: Fn(&crate::exact::Polynomial) -> crate::exact::Polynomial + Copy,
    {
        self.comp
            .iter()
            .flatten()
            .flatten()
            .all(|s| s.is_zero_mod(rewrite))
    }

    /// First nonzero component, for diagnostics.
    pub fn head(&self) -> Option<(usize, usize, usize, &Scalar)> {
        for i in 0..DIM {
            for j in 0..DIM {
                for k in (j + 1)..DIM {
                    if !self.comp[i][j][k].is_zero() {
                        return Some((i, j, k, &self.comp[i][j][k]));
                    }
                }
            }
        }
        None
    }

    pub fn antisymmetry_holds(&self) -> bool {
        for i in 0..DIM {
            for j in 0..DIM {
                for k in 0..DIM {
                    if !self.comp[i][j][k].add_ref(&self.comp[i][k][j]).is_zero() {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn sub(&self, other: &Torsion3Tensor) -> Torsion3Tensor {
        Torsion3Tensor {
            ctx: self.ctx.clone(),
            comp: (0..DIM)
                .map(|i| {
                    (0..DIM)
                        .map(|j| {
                            (0..DIM)
                                .map(|k| self.comp[i][j][k].sub_ref(&other.comp[i][j][k]))
                                .collect()
                        })
                        .collect()
                })
                .collect(),
        }
    }
}

fn derivatives(l: &TensorField11) -> Vec<Vec<Vec<Scalar>>> {
    // d[alpha][i][j] = d L^i_j / d x^alpha
    (0..DIM)
        .map(|alpha| {
            (0..DIM)
                .map(|i| (0..DIM).map(|j| l.entry(i, j).derivative(alpha)).collect())
                .collect()
        })
        .collect()
}

/// Nijenhuis torsion in coordinates:
/// `(T_L)^i_{jk} = sum_a ( dL^i_k/dx^a L^a_j - dL^i_j/dx^a L^a_k
///                        + (dL^a_j/dx^k - dL^a_k/dx^j) L^i_a )`.
pub fn nijenhuis_torsion(l: &TensorField11) -> Torsion3Tensor {
    let ctx = l.context().clone();
    let dl = derivatives(l);
    Torsion3Tensor::new_filled(&ctx, |i, j, k| {
        let mut acc = Scalar::zero(&ctx);
        for a in 0..DIM {
            acc = acc.add_ref(&dl[a][i][k].mul_ref(l.entry(a, j)));
            acc = acc.sub_ref(&dl[a][i][j].mul_ref(l.entry(a, k)));
            let curl = dl[k][a][j].sub_ref(&dl[j][a][k]);
            acc = acc.add_ref(&curl.mul_ref(l.entry(i, a)));
        }
        acc
    })
}

/// Haantjes torsion through its local coordinate expression. Indices in
/// square brackets are skew-symmetrized over `(j, k)` with weight one,
/// `X_[j Y_k] = X_j Y_k - X_k Y_j`; with that convention the expression
/// agrees exactly with the invariant composition in
/// [`haantjes_torsion_invariant`].
pub fn haantjes_torsion(l: &TensorField11) -> Torsion3Tensor {
    let ctx = l.context().clone();
    let l2 = l.mul(l);
    let l3 = l2.mul(l);
    let dl = derivatives(l);
    let dl2 = derivatives(&l2);
    let skew = |x: &Scalar, y: &Scalar| x.sub_ref(y);
    Torsion3Tensor::new_filled(&ctx, |i, j, k| {
        let mut acc = Scalar::zero(&ctx);
        for a in 0..DIM {
            // -2 (L^3)^i_a d_[j L^a_k]
            let t1 = skew(&dl[j][a][k], &dl[k][a][j]);
            acc = acc.sub_ref(&l3.entry(i, a).mul_ref(&t1).scale(&crate::exact::rat(2, 1)));
            // (L^2)^i_a ( d_[j (L^2)^a_k] + 4 sum_b L^b_[j d_|b| L^a_k] )
            let mut t2 = skew(&dl2[j][a][k], &dl2[k][a][j]);
            for b in 0..DIM {
                let inner = skew(
                    &l.entry(b, j).mul_ref(&dl[b][a][k]),
                    &l.entry(b, k).mul_ref(&dl[b][a][j]),
                );
                t2 = t2.add_ref(&inner.scale(&crate::exact::rat(4, 1)));
            }
            acc = acc.add_ref(&l2.entry(i, a).mul_ref(&t2));
            // -2 L^i_a sum_b ( L^b_[j d_|b| (L^2)^a_k] + (L^2)^b_[j d_|b| L^a_k] )
            let mut t3 = Scalar::zero(&ctx);
            for b in 0..DIM {
                t3 = t3.add_ref(&skew(
                    &l.entry(b, j).mul_ref(&dl2[b][a][k]),
                    &l.entry(b, k).mul_ref(&dl2[b][a][j]),
                ));
                t3 = t3.add_ref(&skew(
                    &l2.entry(b, j).mul_ref(&dl[b][a][k]),
                    &l2.entry(b, k).mul_ref(&dl[b][a][j]),
                ));
            }
            acc = acc.sub_ref(&l.entry(i, a).mul_ref(&t3).scale(&crate::exact::rat(2, 1)));
            // (L^2)^a_[j d_|a| (L^2)^i_k]
            acc = acc.add_ref(&skew(
                &l2.entry(a, j).mul_ref(&dl2[a][i][k]),
                &l2.entry(a, k).mul_ref(&dl2[a][i][j]),
            ));
        }
        acc
    })
}

/// Haantjes torsion through the invariant composition
/// `H_L(X,Y) = L^2 T_L(X,Y) + T_L(LX, LY) - L(T_L(X, LY) + T_L(LX, Y))`,
/// used to cross-validate the coordinate formula.
pub fn haantjes_torsion_invariant(l: &TensorField11) -> Torsion3Tensor {
    let ctx = l.context().clone();
    let t = nijenhuis_torsion(l);
    let l2 = l.mul(l);
    Torsion3Tensor::new_filled(&ctx, |i, j, k| {
        let mut acc = Scalar::zero(&ctx);
        for a in 0..DIM {
            acc = acc.add_ref(&l2.entry(i, a).mul_ref(t.component(a, j, k)));
            for b in 0..DIM {
                acc = acc.add_ref(
                    &t.component(i, a, b)
                        .mul_ref(l.entry(a, j))
                        .mul_ref(l.entry(b, k)),
                );
                let inner = t
                    .component(a, j, b)
                    .mul_ref(l.entry(b, k))
                    .add_ref(&t.component(a, b, k).mul_ref(l.entry(b, j)));
                acc = acc.sub_ref(&l.entry(i, a).mul_ref(&inner));
            }
        }
        acc
    })
}

/// Residual of the algebraic compatibility `Omega K = K^T Omega` together
/// with the block conditions `B + B^T = 0`, `C + C^T = 0`.
pub struct CompatibilityResidual {
    pub omega_residual: Vec<Vec<Scalar>>,
    pub b_skew_residual: Vec<Vec<Scalar>>,
    pub c_skew_residual: Vec<Vec<Scalar>>,
    pub d_minus_a_t: Vec<Vec<Scalar>>,
}

impl CompatibilityResidual {
    pub fn is_zero(&self) -> bool {
        self.omega_residual.iter().flatten().all(|s| s.is_zero())
            && self.b_skew_residual.iter().flatten().all(|s| s.is_zero())
            && self.c_skew_residual.iter().flatten().all(|s| s.is_zero())
            && self.d_minus_a_t.iter().flatten().all(|s| s.is_zero())
    }

    pub fn head(&self) -> Option<String> {
        self.omega_residual
            .iter()
            .flatten()
            .chain(self.b_skew_residual.iter().flatten())
            .chain(self.c_skew_residual.iter().flatten())
            .chain(self.d_minus_a_t.iter().flatten())
            .find(|s| !s.is_zero())
            .map(|s| s.to_string())
    }
}

pub fn symplectic_compatibility(k: &TensorField11) -> CompatibilityResidual {
    let ctx = k.context();
    // Omega K - K^T Omega
    let mut omega_residual = vec![vec![Scalar::zero(ctx); DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            let mut acc = Scalar::zero(ctx);
            for a in 0..DIM {
                let w1 = omega_entry(i, a);
                if w1 != 0 {
                    acc = acc.add_ref(&k.entry(a, j).scale(&BigRational::from_integer(w1.into())));
                }
                let w2 = omega_entry(a, j);
                if w2 != 0 {
                    acc = acc.sub_ref(&k.entry(a, i).scale(&BigRational::from_integer(w2.into())));
                }
            }
            omega_residual[i][j] = acc;
        }
    }
    let skew_res = |block: Vec<Vec<Scalar>>| -> Vec<Vec<Scalar>> {
        (0..DOF)
            .map(|i| {
                (0..DOF)
                    .map(|j| block[i][j].add_ref(&block[j][i]))
                    .collect()
            })
            .collect()
    };
    let a = k.block(0, 0);
    let d = k.block(1, 1);
    let d_minus_a_t = (0..DOF)
        .map(|i| {
            (0..DOF)
                .map(|j| d[i][j].sub_ref(&a[j][i]))
                .collect()
        })
        .collect();
    CompatibilityResidual {
        omega_residual,
        b_skew_residual: skew_res(k.block(0, 1)),
        c_skew_residual: skew_res(k.block(1, 0)),
        d_minus_a_t,
    }
}

/// Eigenvalues with algebraic multiplicities. For lift-form operators the
/// spectrum is that of the position block, doubled; otherwise the quartic
/// characteristic polynomial must be a perfect square of a quadratic.
pub fn eigen_data(k: &TensorField11) -> Result<Vec<(Scalar, usize)>> {
    let ctx = k.context().clone();
    let (tr, det) = if k.b_block_is_zero() {
        let a = k.block(0, 0);
        let tr = a[0][0].add_ref(&a[1][1]);
        let det = a[0][0]
            .mul_ref(&a[1][1])
            .sub_ref(&a[0][1].mul_ref(&a[1][0]));
        (tr, det)
    } else {
        quadratic_square_root_of_charpoly(k)?
    };
    let disc_s = tr.mul_ref(&tr).sub_ref(&det.scale(&crate::exact::rat(4, 1)));
    let disc = disc_s
        .as_rat()
        .ok_or(Error::NonSquareCharPoly)?
        .clone();
    let root = Scalar::sqrt_rat(&disc)?;
    let half = crate::exact::rat(1, 2);
    if root.is_zero() {
        return Ok(vec![(tr.scale(&half), 4)]);
    }
    let lam_plus = tr.add_ref(&root).scale(&half);
    let lam_minus = tr.sub_ref(&root).scale(&half);
    let mut eigs = vec![(lam_plus, 2usize), (lam_minus, 2usize)];
    // deterministic presentation: extension roots keep the +sqrt branch
    // first, rational roots are sorted descending
    if eigs.iter().all(|(l, _)| l.is_rational()) {
        eigs.sort_by(|(a, _), (b, _)| b.cmp_canonical(a));
    }
    let _ = ctx;
    Ok(eigs)
}

/// For a general compatible operator, try to write `det(K - lambda I)` as
/// `(lambda^2 - tr lambda + det)^2` and return `(tr, det)`.
fn quadratic_square_root_of_charpoly(k: &TensorField11) -> Result<(Scalar, Scalar)> {
    let ctx = k.context();
    let ext = ctx.extend(&["lambda_"])?;
    let lam = Scalar::var(&ext, "lambda_")?;
    let mut m: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(&ext); DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            m[i][j] = k.entry(i, j).lift(&ext)?;
            if i == j {
                m[i][j] = m[i][j].sub_ref(&lam);
            }
        }
    }
    let charpoly = det4(&ext, &m);
    let r = charpoly.as_rat().ok_or(Error::NonSquareCharPoly)?;
    // coefficients in lambda: c4 = 1 for the quartic of a 4x4 determinant
    let lam_idx = ext.index("lambda_")?;
    let coeff = |deg: u16| -> Result<Scalar> {
        let den = r.den_factors().to_vec();
        let mut num_terms = Vec::new();
        for (mono, c) in r.numerator().terms() {
            if mono.0[lam_idx] == deg {
                let mut m2 = mono.clone();
                m2.0[lam_idx] = 0;
                num_terms.push((m2, c.clone()));
            }
        }
        let num = crate::exact::Polynomial::from_terms(&ext, num_terms);
        let rf = crate::exact::RationalFunction::new(num, den);
        Ok(Scalar::Rat(rf.lift(ctx)?))
    };
    let c4 = coeff(4)?;
    let c3 = coeff(3)?;
    let c2 = coeff(2)?;
    let c1 = coeff(1)?;
    let c0 = coeff(0)?;
    if !c4.equals(&Scalar::one(ctx)) {
        return Err(Error::NonSquareCharPoly);
    }
    // (lambda^2 - u lambda + v)^2 expands with c3 = -2u, c2 = u^2 + 2v
    let half = crate::exact::rat(1, 2);
    let u = c3.neg_ref().scale(&half);
    let v = c2.sub_ref(&u.mul_ref(&u)).scale(&half);
    let c1_expect = u.mul_ref(&v).scale(&crate::exact::rat(-2, 1));
    let c0_expect = v.mul_ref(&v);
    if !c1.equals(&c1_expect) || !c0.equals(&c0_expect) {
        return Err(Error::NonSquareCharPoly);
    }
    Ok((u, v))
}

fn det4(ctx: &Context, m: &[Vec<Scalar>]) -> Scalar {
    // cofactor expansion along the first row
    let minor = |m: &[Vec<Scalar>], skip_r: usize, skip_c: usize| -> Vec<Vec<Scalar>> {
        m.iter()
            .enumerate()
            .filter(|(i, _)| *i != skip_r)
            .map(|(_, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip_c)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect()
    };
    fn det3(ctx: &Context, m: &[Vec<Scalar>]) -> Scalar {
        let mut acc = Scalar::zero(ctx);
        let perms: [(usize, usize, usize, i64); 6] = [
            (0, 1, 2, 1),
            (0, 2, 1, -1),
            (1, 0, 2, -1),
            (1, 2, 0, 1),
            (2, 0, 1, 1),
            (2, 1, 0, -1),
        ];
        for (a, b, c, sgn) in perms {
            let t = m[0][a]
                .mul_ref(&m[1][b])
                .mul_ref(&m[2][c])
                .scale(&BigRational::from_integer(sgn.into()));
            acc = acc.add_ref(&t);
        }
        acc
    }
    let mut acc = Scalar::zero(ctx);
    for j in 0..4 {
        if m[0][j].is_zero() {
            continue;
        }
        let sub = minor(m, 0, j);
        let cof = det3(ctx, &sub);
        let signed = if j % 2 == 0 { cof } else { cof.neg_ref() };
        acc = acc.add_ref(&m[0][j].mul_ref(&signed));
    }
    acc
}

/// Checks `(K - lambda_1 I)(K - lambda_2 I) = 0` for the distinct
/// eigenvalues; radical eigenvalue pairs enter through their (rational)
/// sum and product.
pub fn semisimplicity_residual(
    k: &TensorField11,
    eigs: &[(Scalar, usize)],
) -> TensorField11 {
    let ctx = k.context();
    let id = TensorField11::identity(ctx);
    match eigs.len() {
        1 => k.sub(&id.scale(&eigs[0].0)),
        2 => {
            let sum = eigs[0].0.add_ref(&eigs[1].0);
            let prod = eigs[0].0.mul_ref(&eigs[1].0);
            k.mul(k).sub(&k.scale(&sum)).add(&id.scale(&prod))
        }
        _ => {
            // general product over distinct eigenvalues
            let mut acc = id.clone();
            for (l, _) in eigs {
                acc = acc.mul(&k.sub(&id.scale(l)));
            }
            acc
        }
    }
}

/// Basis of `ker(K^T - lambda I)`, entries cleared of denominators.
/// The expected kernel rank is two (doubled spectrum).
pub fn codistribution_basis(k: &TensorField11, lambda: &Scalar) -> Result<Vec<OneForm>> {
    let ctx = k.context().clone();
    let lam = lambda.lift(&ctx)?;
    let mut m: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(&ctx); DIM]; DIM];
    for i in 0..DIM {
        for j in 0..DIM {
            m[i][j] = k.entry(j, i).clone();
            if i == j {
                m[i][j] = m[i][j].sub_ref(&lam);
            }
        }
    }
    let basis = linalg::kernel_basis(&ctx, &m);
    if basis.len() != 2 {
        return Err(Error::WrongRank {
            expected: 2,
            found: basis.len(),
        });
    }
    let forms: Vec<OneForm> = basis
        .into_iter()
        .map(|v| OneForm::new([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()]))
        .collect();
    // residual check: (K^T - lambda I) sigma = 0
    for f in &forms {
        let r = k
            .transpose_apply(f)
            .sub(&f.scale(&lam));
        assert!(r.is_zero(), "kernel vector fails the residual check");
    }
    Ok(forms)
}

/// Is `candidate` in the span of `basis` (over the rational-function field)?
pub fn in_span(basis: &[OneForm], candidate: &OneForm) -> bool {
    let ctx = candidate.context().clone();
    let mut rows: Vec<Vec<Scalar>> = basis
        .iter()
        .map(|f| f.coeffs.to_vec())
        .collect();
    let r0 = linalg::rank(&ctx, &rows);
    rows.push(candidate.coeffs.to_vec());
    linalg::rank(&ctx, &rows) == r0
}

/// Commutator residual `K1 K2 - K2 K1`.
pub fn commutator(k1: &TensorField11, k2: &TensorField11) -> TensorField11 {
    k1.mul(k2).sub(&k2.mul(k1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_scalar;

    fn ctx() -> Context {
        Context::new(&["q1", "q2", "p1", "p2"]).unwrap()
    }

    fn t(ctx: &Context, rows: [[&str; 4]; 4]) -> TensorField11 {
        TensorField11::from_rows(
            ctx,
            rows.iter()
                .map(|r| r.iter().map(|e| parse_scalar(ctx, e).unwrap()).collect())
                .collect(),
        )
    }

    #[test]
    fn identity_has_zero_torsion() {
        let c = ctx();
        let id = TensorField11::identity(&c);
        assert!(nijenhuis_torsion(&id).is_zero());
        assert!(haantjes_torsion(&id).is_zero());
    }

    #[test]
    fn constant_tensor_has_zero_nijenhuis() {
        let c = ctx();
        let k = t(
            &c,
            [
                ["1", "2", "0", "3"],
                ["0", "1", "4", "0"],
                ["5", "0", "1", "0"],
                ["0", "0", "2", "7"],
            ],
        );
        assert!(nijenhuis_torsion(&k).is_zero());
    }

    #[test]
    fn coordinate_and_invariant_haantjes_agree() {
        let c = ctx();
        let k = t(
            &c,
            [
                ["q1", "p2", "0", "q2"],
                ["p1", "q2", "q1", "0"],
                ["0", "q1 + p1", "p2", "q2"],
                ["q2", "0", "p1", "q1 + q2"],
            ],
        );
        let h1 = haantjes_torsion(&k);
        let h2 = haantjes_torsion_invariant(&k);
        assert!(h1.sub(&h2).is_zero());
        assert!(h1.antisymmetry_holds());
    }

    #[test]
    fn nilpotent_block_fails_semisimplicity() {
        let c = ctx();
        let k = t(
            &c,
            [
                ["0", "1", "0", "0"],
                ["0", "0", "0", "0"],
                ["0", "0", "0", "0"],
                ["0", "0", "0", "0"],
            ],
        );
        // double eigenvalue zero; (K - 0)(K - 0) = K^2 = 0 holds, but the
        // minimal polynomial test on a single eigenvalue is K - 0 = K != 0
        let eigs = vec![(Scalar::zero(&c), 4usize)];
        let res = semisimplicity_residual(&k, &eigs);
        assert!(!res.is_zero());
    }

    #[test]
    fn diag_codistribution() {
        let c = ctx();
        let k = t(
            &c,
            [
                ["0", "0", "0", "0"],
                ["0", "1", "0", "0"],
                ["0", "0", "0", "0"],
                ["0", "0", "0", "1"],
            ],
        );
        let one = Scalar::one(&c);
        let basis = codistribution_basis(&k, &one).unwrap();
        // expected span {dq2, dp2}
        let dq2 = OneForm::new([
            Scalar::zero(&c),
            Scalar::one(&c),
            Scalar::zero(&c),
            Scalar::zero(&c),
        ]);
        let dp2 = OneForm::new([
            Scalar::zero(&c),
            Scalar::zero(&c),
            Scalar::zero(&c),
            Scalar::one(&c),
        ]);
        assert!(in_span(&basis, &dq2));
        assert!(in_span(&basis, &dp2));
    }
}
