//! Exact linear algebra helpers: reduced row echelon form over the
//! rationals for coefficient systems, and fraction-free (Bareiss-style)
//! elimination over the polynomial ring for kernel computations.

use num::{BigRational, One, Signed, Zero};

use crate::exact::{Context, Polynomial, RationalFunction, Scalar};

/// Dense reduced row echelon form over Q with partial pivoting by column
/// order. Returns the pivot column of each row.
pub fn rref(rows: &mut Vec<Vec<BigRational>>) -> Vec<usize> {
    let nrows = rows.len();
    if nrows == 0 {
        return Vec::new();
    }
    let ncols = rows[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in 0..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.retain(|row| row.iter().any(|x| !x.is_zero()));
    pivots
}

/// Solution of a linear system `A x = b` over Q in parametric form.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    /// One particular solution (free variables set to zero).
    pub particular: Vec<BigRational>,
    /// Basis of the homogeneous solution space, one vector per free column.
    pub nullspace: Vec<Vec<BigRational>>,
    /// Indices of the free columns, in increasing order.
    pub free_columns: Vec<usize>,
}

/// Outcome of [`solve_affine`]: either the solution set or the list of row
/// identifiers that could not be satisfied.
pub enum SolveOutcome<K> {
    Solved(AffineSolution),
    Inconsistent(Vec<K>),
}

/// Solve a sparse affine system given as rows `(key, coefficients, rhs)`.
/// The `key` names the equation (and is reported on inconsistency).
pub fn solve_affine<K: Clone>(
    nunknowns: usize,
    rows_in: Vec<(K, Vec<(usize, BigRational)>, BigRational)>,
) -> SolveOutcome<K> {
    let ncols = nunknowns + 1;
    let mut keys: Vec<K> = Vec::with_capacity(rows_in.len());
    let mut rows: Vec<Vec<BigRational>> = Vec::with_capacity(rows_in.len());
    for (key, coeffs, rhs) in rows_in {
        let mut row = vec![BigRational::zero(); ncols];
        for (j, c) in coeffs {
            row[j] += c;
        }
        row[nunknowns] = rhs;
        keys.push(key);
        rows.push(row);
    }
    // RREF on the augmented matrix, tracking the original row for diagnostics
    let nrows = rows.len();
    let mut order: Vec<usize> = (0..nrows).collect();
    let mut pivots: Vec<(usize, usize)> = Vec::new(); // (row, col)
    let mut r = 0;
    for c in 0..nunknowns {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        order.swap(r, p);
        let inv = BigRational::one() / rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                for j in c..ncols {
                    let t = &rows[r][j] * &f;
                    rows[i][j] -= t;
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    // inconsistent rows: all-zero coefficients with nonzero rhs
    let bad: Vec<K> = (0..nrows)
        .filter(|&i| {
            rows[i][..nunknowns].iter().all(|x| x.is_zero()) && !rows[i][nunknowns].is_zero()
        })
        .map(|i| keys[order[i]].clone())
        .collect();
    if !bad.is_empty() {
        return SolveOutcome::Inconsistent(bad);
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free_columns: Vec<usize> = (0..nunknowns)
        .filter(|c| !pivot_cols.contains(c))
        .collect();
    let mut particular = vec![BigRational::zero(); nunknowns];
    for &(row, col) in &pivots {
        particular[col] = rows[row][nunknowns].clone();
    }
    let mut nullspace = Vec::with_capacity(free_columns.len());
    for &fc in &free_columns {
        let mut v = vec![BigRational::zero(); nunknowns];
        v[fc] = BigRational::one();
        for &(row, col) in &pivots {
            v[col] = -rows[row][fc].clone();
        }
        nullspace.push(v);
    }
    SolveOutcome::Solved(AffineSolution {
        particular,
        nullspace,
        free_columns,
    })
}

/// Fraction-free forward elimination of a polynomial matrix (Bareiss).
/// Row operations keep every entry polynomial: after step k each new entry
/// is `(pivot * a_ij - a_ik * a_kj) / previous_pivot`, and the division is
/// exact. Returns the echelon matrix and the pivot columns.
pub fn bareiss_echelon(
    ctx: &Context,
    mut m: Vec<Vec<Polynomial>>,
) -> (Vec<Vec<Polynomial>>, Vec<usize>) {
    let nrows = m.len();
    if nrows == 0 {
        return (m, Vec::new());
    }
    let ncols = m[0].len();
    let mut prev_pivot = Polynomial::constant(ctx, BigRational::one());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        // deterministic pivot: fewest terms, then canonical order
        let cand = (r..nrows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by(|&i, &j| {
                m[i][c]
                    .num_terms()
                    .cmp(&m[j][c].num_terms())
                    .then_with(|| m[i][c].cmp_canonical(&m[j][c]))
                    .then_with(|| i.cmp(&j))
            });
        let Some(p) = cand else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in r + 1..nrows {
            if m[i].iter().all(|e| e.is_zero()) {
                continue;
            }
            let factor = m[i][c].clone();
            for j in 0..ncols {
                let t = pivot.mul_ref(&m[i][j]).sub_ref(&factor.mul_ref(&m[r][j]));
                m[i][j] = t
                    .div_exact(&prev_pivot)
                    .expect("Bareiss division must be exact");
            }
        }
        prev_pivot = pivot;
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Rank of a matrix of scalars by clearing denominators and running the
/// fraction-free elimination (rational entries), or field elimination for
/// extension entries.
pub fn rank(ctx: &Context, m: &[Vec<Scalar>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    if m.iter().flatten().all(|s| s.is_rational()) {
        let cleared = clear_denominators_rows(ctx, m);
        let (ech, pivots) = bareiss_echelon(ctx, cleared);
        let _ = ech;
        pivots.len()
    } else {
        field_echelon_rank(m)
    }
}

/// Clear denominators row by row: multiply each row by the product of all
/// denominator factors appearing in it.
pub fn clear_denominators_rows(ctx: &Context, m: &[Vec<Scalar>]) -> Vec<Vec<Polynomial>> {
    m.iter()
        .map(|row| {
            let mut common = Polynomial::constant(ctx, BigRational::one());
            let mut factors: Vec<(Polynomial, u32)> = Vec::new();
            for s in row {
                let r = s.as_rat().expect("rational entries required");
                for (f, e) in r.den_factors() {
                    match factors.iter_mut().find(|(g, _)| g == f) {
                        Some((_, ge)) => *ge = (*ge).max(*e),
                        None => factors.push((f.clone(), *e)),
                    }
                }
            }
            for (f, e) in &factors {
                common = common.mul_ref(&f.pow(*e));
            }
            row.iter()
                .map(|s| {
                    let r = s.as_rat().unwrap();
                    let cleared = r.mul_ref(&RationalFunction::from_poly(common.clone()));
                    cleared
                        .as_poly()
                        .cloned()
                        .expect("denominators cleared exactly")
                })
                .collect()
        })
        .collect()
}

fn field_echelon_rank(m: &[Vec<Scalar>]) -> usize {
    let mut m: Vec<Vec<Scalar>> = m.to_vec();
    let nrows = m.len();
    let ncols = m[0].len();
    let mut rank = 0;
    for c in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][c].inverse().expect("nonzero pivot");
        for j in 0..ncols {
            m[rank][j] = m[rank][j].mul_ref(&inv);
        }
        for i in 0..nrows {
            if i != rank && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = m[rank][j].mul_ref(&f);
                    m[i][j] = m[i][j].sub_ref(&t);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Kernel basis of a square scalar matrix, entries cleared of denominators.
/// Rational case runs fraction-free elimination over the polynomial ring;
/// extension entries use field elimination.
pub fn kernel_basis(ctx: &Context, m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let all_rat = m.iter().flatten().all(|s| s.is_rational());
    if all_rat {
        let cleared = clear_denominators_rows(ctx, m);
        let (ech, pivots) = bareiss_echelon(ctx, cleared);
        kernel_from_echelon_poly(ctx, &ech, &pivots, n)
    } else {
        kernel_field(ctx, m)
    }
}

fn kernel_from_echelon_poly(
    ctx: &Context,
    ech: &[Vec<Polynomial>],
    pivots: &[usize],
    n: usize,
) -> Vec<Vec<Scalar>> {
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        // back-substitute keeping entries polynomial: cross-multiply by pivots
        let mut v: Vec<RationalFunction> = vec![RationalFunction::zero(ctx); n];
        v[fc] = RationalFunction::one(ctx);
        for (ri, &pc) in pivots.iter().enumerate().rev() {
            // row ri: sum_j ech[ri][j] v[j] = 0  =>  v[pc] = -(sum_{j>pc}) / pivot
            let mut acc = RationalFunction::zero(ctx);
            for j in (pc + 1)..n {
                if !ech[ri][j].is_zero() && !v[j].is_zero() {
                    acc = acc.add_ref(
                        &RationalFunction::from_poly(ech[ri][j].clone()).mul_ref(&v[j]),
                    );
                }
            }
            let pivot = RationalFunction::from_poly(ech[ri][pc].clone());
            v[pc] = acc.neg_ref().div_ref(&pivot).expect("nonzero pivot");
        }
        basis.push(normalize_kernel_vector(ctx, &v));
    }
    basis
}

fn kernel_field(ctx: &Context, m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inverse().expect("nonzero pivot");
        for j in 0..n {
            a[r][j] = a[r][j].mul_ref(&inv);
        }
        for i in 0..n {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..n {
                    let t = a[r][j].mul_ref(&f);
                    a[i][j] = a[i][j].sub_ref(&t);
                }
            }
        }
        pivots.push((r, c));
        r += 1;
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![Scalar::zero(ctx); n];
        v[fc] = Scalar::one(ctx);
        for &(row, col) in &pivots {
            v[col] = a[row][fc].neg_ref();
        }
        basis.push(v);
    }
    basis
}

/// Clear denominators from a kernel vector and normalize by content so the
/// printed fixture is reproducible.
fn normalize_kernel_vector(ctx: &Context, v: &[RationalFunction]) -> Vec<Scalar> {
    let mut factors: Vec<(Polynomial, u32)> = Vec::new();
    for r in v {
        for (f, e) in r.den_factors() {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some((_, ge)) => *ge = (*ge).max(*e),
                None => factors.push((f.clone(), *e)),
            }
        }
    }
    let mut common = Polynomial::constant(ctx, BigRational::one());
    for (f, e) in &factors {
        common = common.mul_ref(&f.pow(*e));
    }
    let cleared: Vec<Polynomial> = v
        .iter()
        .map(|r| {
            r.mul_ref(&RationalFunction::from_poly(common.clone()))
                .as_poly()
                .cloned()
                .expect("cleared")
        })
        .collect();
    // divide through by the gcd of contents; flip sign so the first nonzero
    // entry has positive leading coefficient
    let mut content: Option<BigRational> = None;
    for p in &cleared {
        if p.is_zero() {
            continue;
        }
        let c = p.content().abs();
        content = Some(match content {
            None => c,
            Some(prev) => {
                // rational gcd: gcd of numerators over lcm of denominators
                let n = num::integer::gcd(prev.numer().clone(), c.numer().clone());
                let d = num::integer::lcm(prev.denom().clone(), c.denom().clone());
                BigRational::new(n, d)
            }
        });
    }
    let mut scale = BigRational::one() / content.unwrap_or_else(BigRational::one);
    if let Some(first) = cleared.iter().find(|p| !p.is_zero()) {
        if first.leading().unwrap().1 < &BigRational::zero() {
            scale = -scale;
        }
    }
    cleared
        .into_iter()
        .map(|p| Scalar::from(p.scale(&scale)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse_poly;

    #[test]
    fn rref_solves_small_system() {
        // x + y = 3, x - y = 1  =>  x = 2, y = 1
        let rows = vec![
            ((), vec![(0, rat(1)), (1, rat(1))], rat(3)),
            ((), vec![(0, rat(1)), (1, rat(-1))], rat(1)),
        ];
        match solve_affine(2, rows) {
            SolveOutcome::Solved(s) => {
                assert_eq!(s.particular, vec![rat(2), rat(1)]);
                assert!(s.nullspace.is_empty());
            }
            SolveOutcome::Inconsistent(_) => panic!("consistent system"),
        }
    }

    #[test]
    fn detects_inconsistency() {
        let rows = vec![
            ("a", vec![(0, rat(1))], rat(1)),
            ("b", vec![(0, rat(1))], rat(2)),
        ];
        match solve_affine(1, rows) {
            SolveOutcome::Solved(_) => panic!("inconsistent system"),
            SolveOutcome::Inconsistent(keys) => assert_eq!(keys.len(), 1),
        }
    }

    #[test]
    fn bareiss_kernel_of_polynomial_matrix() {
        let ctx = Context::new(&["x", "y"]).unwrap();
        // M = [[x, y], [x, y]] has kernel spanned by (y, -x) after clearing
        let m = vec![
            vec![
                Scalar::from(parse_poly(&ctx, "x").unwrap()),
                Scalar::from(parse_poly(&ctx, "y").unwrap()),
            ],
            vec![
                Scalar::from(parse_poly(&ctx, "x").unwrap()),
                Scalar::from(parse_poly(&ctx, "y").unwrap()),
            ],
        ];
        let k = kernel_basis(&ctx, &m);
        assert_eq!(k.len(), 1);
        // check M v = 0
        for row in &m {
            let mut acc = Scalar::zero(&ctx);
            for (a, b) in row.iter().zip(&k[0]) {
                acc = acc.add_ref(&a.mul_ref(b));
            }
            assert!(acc.is_zero());
        }
    }

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }
}
