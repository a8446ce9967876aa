//! Darboux phase space with two degrees of freedom. The first four
//! variables of a context are always the chart, in the order
//! `(q1, q2, p1, p2)`; everything after them is a parameter and behaves as
//! a constant under brackets and differentials.

use crate::exact::{Context, Scalar};

pub const DOF: usize = 2;
pub const DIM: usize = 2 * DOF;

/// Index of the i-th position variable (0-based).
pub fn qi(i: usize) -> usize {
    debug_assert!(i < DOF);
    i
}

/// Index of the i-th momentum variable (0-based).
pub fn pi(i: usize) -> usize {
    debug_assert!(i < DOF);
    DOF + i
}

/// The symplectic matrix for `omega = sum dq^i wedge dp_i` in the chart
/// order `(q1, q2, p1, p2)`: `Omega = [[0, -I], [I, 0]]`, and the Poisson
/// bivector is its inverse `P = [[0, I], [-I, 0]]`. `Omega^2 = -I`.
pub fn omega_entry(row: usize, col: usize) -> i64 {
    if row < DOF && col == row + DOF {
        -1
    } else if row >= DOF && col + DOF == row {
        1
    } else {
        0
    }
}

/// A 1-form on phase space: four coefficients against `(dq1, dq2, dp1, dp2)`.
#[derive(Clone, Debug)]
pub struct OneForm {
    pub coeffs: [Scalar; 4],
}

impl OneForm {
    pub fn new(coeffs: [Scalar; 4]) -> Self {
        let ctx = coeffs[0].context();
        for c in &coeffs[1..] {
            assert!(c.context().same(ctx), "context mismatch in OneForm");
        }
        OneForm { coeffs }
    }

    pub fn zero(ctx: &Context) -> Self {
        OneForm {
            coeffs: std::array::from_fn(|_| Scalar::zero(ctx)),
        }
    }

    pub fn context(&self) -> &Context {
        self.coeffs[0].context()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &OneForm) -> OneForm {
        OneForm::new(std::array::from_fn(|i| {
            self.coeffs[i].add_ref(&other.coeffs[i])
        }))
    }

    pub fn sub(&self, other: &OneForm) -> OneForm {
        OneForm::new(std::array::from_fn(|i| {
            self.coeffs[i].sub_ref(&other.coeffs[i])
        }))
    }

    pub fn scale(&self, s: &Scalar) -> OneForm {
        OneForm::new(std::array::from_fn(|i| self.coeffs[i].mul_ref(s)))
    }

    /// Natural pairing with a vector field.
    pub fn pair_vector(&self, x: &[Scalar; 4]) -> Scalar {
        let mut acc = Scalar::zero(self.context());
        for i in 0..4 {
            acc = acc.add_ref(&self.coeffs[i].mul_ref(&x[i]));
        }
        acc
    }

    /// The six independent components of the exterior derivative,
    /// `(d alpha)_{ab} = d_a alpha_b - d_b alpha_a` for `a < b`.
    pub fn exterior_derivative(&self) -> Vec<((usize, usize), Scalar)> {
        let mut out = Vec::with_capacity(6);
        for a in 0..4 {
            for b in (a + 1)..4 {
                let r = self.coeffs[b]
                    .derivative(a)
                    .sub_ref(&self.coeffs[a].derivative(b));
                out.push(((a, b), r));
            }
        }
        out
    }

    pub fn is_exact(&self) -> bool {
        self.exterior_derivative().iter().all(|(_, r)| r.is_zero())
    }
}

/// Exterior differential of a scalar: `(df/dq1, df/dq2, df/dp1, df/dp2)`.
pub fn differential(f: &Scalar) -> OneForm {
    OneForm::new(std::array::from_fn(|i| f.derivative(i)))
}

/// Canonical Poisson bracket
/// `{f, g} = sum_i df/dq_i dg/dp_i - df/dp_i dg/dq_i`.
pub fn poisson_bracket(f: &Scalar, g: &Scalar) -> Scalar {
    assert!(f.context().same(g.context()), "context mismatch");
    let mut acc = Scalar::zero(f.context());
    for i in 0..DOF {
        let t1 = f.derivative(qi(i)).mul_ref(&g.derivative(pi(i)));
        let t2 = f.derivative(pi(i)).mul_ref(&g.derivative(qi(i)));
        acc = acc.add_ref(&t1).sub_ref(&t2);
    }
    acc
}

/// Pairing through the Poisson bivector:
/// `<alpha, P beta> = sum_i alpha_{q_i} beta_{p_i} - alpha_{p_i} beta_{q_i}`.
pub fn poisson_pairing(alpha: &OneForm, beta: &OneForm) -> Scalar {
    let mut acc = Scalar::zero(alpha.context());
    for i in 0..DOF {
        let t1 = alpha.coeffs[qi(i)].mul_ref(&beta.coeffs[pi(i)]);
        let t2 = alpha.coeffs[pi(i)].mul_ref(&beta.coeffs[qi(i)]);
        acc = acc.add_ref(&t1).sub_ref(&t2);
    }
    acc
}

/// Hamiltonian vector field of `f`: `X_f = P df`, i.e.
/// `X_f = (df/dp1, df/dp2, -df/dq1, -df/dq2)`.
pub fn hamiltonian_vector_field(f: &Scalar) -> [Scalar; 4] {
    [
        f.derivative(pi(0)),
        f.derivative(pi(1)),
        f.derivative(qi(0)).neg_ref(),
        f.derivative(qi(1)).neg_ref(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_scalar;

    fn ctx() -> Context {
        Context::new(&["q1", "q2", "p1", "p2"]).unwrap()
    }

    #[test]
    fn canonical_brackets() {
        let c = ctx();
        let q1 = Scalar::var(&c, "q1").unwrap();
        let p1 = Scalar::var(&c, "p1").unwrap();
        let p2 = Scalar::var(&c, "p2").unwrap();
        assert!(poisson_bracket(&q1, &p1).equals(&Scalar::one(&c)));
        assert!(poisson_bracket(&q1, &p2).is_zero());
        assert!(poisson_bracket(&p1, &p2).is_zero());
    }

    #[test]
    fn differential_of_angular_momentum() {
        let c = ctx();
        let j = parse_scalar(&c, "q1*p2 - q2*p1").unwrap();
        let dj = differential(&j);
        let expect = [
            parse_scalar(&c, "p2").unwrap(),
            parse_scalar(&c, "-p1").unwrap(),
            parse_scalar(&c, "-q2").unwrap(),
            parse_scalar(&c, "q1").unwrap(),
        ];
        for (a, b) in dj.coeffs.iter().zip(&expect) {
            assert!(a.equals(b));
        }
        assert!(dj.is_exact());
    }

    #[test]
    fn canonical_poisson_pairing() {
        let c = ctx();
        let dq1 = differential(&Scalar::var(&c, "q1").unwrap());
        let dp1 = differential(&Scalar::var(&c, "p1").unwrap());
        assert!(poisson_pairing(&dq1, &dp1).equals(&Scalar::one(&c)));
        assert!(poisson_pairing(&dq1, &dq1).is_zero());
    }
}
