//! Exact integer linear algebra over arbitrary-precision integers.
//!
//! Provides Smith and Hermite normal forms with transformation matrices,
//! sublattice bases cut out by congruence conditions, finite lattice indices
//! via elementary divisors, and enumeration of lattice points under the
//! linear constraint shapes used by the Knutson-Tao cone.
//!
//! Entries are `BigInt` throughout: the smallest-pivot strategy keeps growth
//! moderate, but intermediate entries in Smith reduction can still exceed
//! machine words at the dimensions that occur here (up to ~48).

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Dense integer matrix, row major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.data[i * self.cols + j])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl IntMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows_i64(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_i64(&self, i: usize) -> Option<Vec<i64>> {
        self.row(i).iter().map(|v| i64::try_from(v).ok()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a * &other[(k, j)];
                    out[(i, j)] += t;
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = &self[(i, j)];
                if i == j && !v.is_one() {
                    return false;
                }
                if i != j && !v.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Determinant by fraction-free Gaussian elimination (Bareiss).
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, p);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = num / &prev;
                }
            }
            for i in k + 1..n {
                a[(i, k)] = BigInt::zero();
            }
            prev = a[(k, k)].clone();
        }
        sign * a[(n - 1, n - 1)].clone()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let idx = i * self.cols + c;
            let v = core::mem::take(&mut self.data[idx]);
            self.data[idx] = -v;
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            let idx = i * self.cols + j;
            let v = core::mem::take(&mut self.data[idx]);
            self.data[idx] = -v;
        }
    }

    /// row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for k in 0..self.cols {
            let t = c * &self.data[j * self.cols + k];
            self.data[i * self.cols + k] += t;
        }
    }

    /// col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let t = c * &self.data[r * self.cols + j];
            self.data[r * self.cols + i] += t;
        }
    }
}

impl core::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Basis of a finite-rank subgroup of `Z^ambient_dim`: rows are the basis
/// vectors, linearly independent over `Q`.
#[derive(Clone, Debug)]
pub struct SublatticeBasis {
    ambient_dim: usize,
    basis: IntMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LatticeError {
    /// A generator does not lie in the Z-span of the claimed superlattice.
    NotASublattice,
    /// Claimed basis rows are linearly dependent.
    RankDeficient,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotASublattice => write!(f, "generator outside the superlattice"),
            LatticeError::RankDeficient => write!(f, "basis rows are linearly dependent"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

impl Index {
    pub fn finite(&self) -> Option<&BigInt> {
        match self {
            Index::Finite(v) => Some(v),
            Index::Infinite => None,
        }
    }
}

impl SublatticeBasis {
    /// Standard lattice `Z^n`.
    pub fn standard(n: usize) -> Self {
        Self { ambient_dim: n, basis: IntMatrix::identity(n) }
    }

    /// Builds a basis from the rows of `m`, which must be Q-linearly
    /// independent.
    pub fn from_rows(ambient_dim: usize, m: IntMatrix) -> Result<Self, LatticeError> {
        assert_eq!(m.cols(), ambient_dim);
        let (h, _) = hermite_normal_form(&m);
        let rank = (0..h.rows()).filter(|&i| !row_is_zero(&h, i)).count();
        if rank != m.rows() {
            return Err(LatticeError::RankDeficient);
        }
        Ok(Self { ambient_dim, basis: m })
    }

    /// Builds a basis spanning the same lattice as the (possibly redundant)
    /// generator rows of `m`: the nonzero rows of the Hermite normal form.
    pub fn from_generators(ambient_dim: usize, m: &IntMatrix) -> Self {
        assert_eq!(m.cols(), ambient_dim);
        let (h, _) = hermite_normal_form(m);
        let rows: Vec<usize> = (0..h.rows()).filter(|&i| !row_is_zero(&h, i)).collect();
        let mut basis = IntMatrix::zero(rows.len(), ambient_dim);
        for (out, &i) in rows.iter().enumerate() {
            for j in 0..ambient_dim {
                basis[(out, j)] = h[(i, j)].clone();
            }
        }
        Self { ambient_dim, basis }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn rank(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis_matrix(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn basis_rows_i64(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rank()).map(|i| self.basis.row_i64(i)).collect()
    }

    /// Integer coordinates of `v` in this basis, or `None` if `v` is not in
    /// the Z-span.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.ambient_dim);
        solve_left(&self.basis, v)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_i64(&self, v: &[i64]) -> bool {
        let b: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        self.contains(&b)
    }
}

fn row_is_zero(m: &IntMatrix, i: usize) -> bool {
    (0..m.cols()).all(|j| m[(i, j)].is_zero())
}

/// Smith normal form `A = U * D * V` with `U`, `V` unimodular and `D`
/// diagonal satisfying the divisibility chain `D[i,i] | D[i+1,i+1]`.
///
/// Inverses are tracked alongside so callers can change coordinates in both
/// directions without re-solving.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    pub fn rank(&self) -> usize {
        let n = core::cmp::min(self.d.rows(), self.d.cols());
        (0..n).take_while(|&i| !self.d[(i, i)].is_zero()).count()
    }

    /// Nonzero diagonal entries, in chain order.
    pub fn elementary_divisors(&self) -> Vec<BigInt> {
        let n = core::cmp::min(self.d.rows(), self.d.cols());
        (0..n).map(|i| self.d[(i, i)].clone()).filter(|v| !v.is_zero()).collect()
    }
}

struct SnfState {
    d: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfState {
    // Invariant throughout: original = u * d * v.
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.d.swap_rows(i, j);
        self.u.swap_cols(i, j);
        self.u_inv.swap_rows(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.d.swap_cols(i, j);
        self.v.swap_rows(i, j);
        self.v_inv.swap_cols(i, j);
    }

    // row_i += c * row_t on d
    fn add_row(&mut self, i: usize, t: usize, c: &BigInt) {
        self.d.add_row(i, t, c);
        let neg = -c;
        self.u.add_col(t, i, &neg);
        self.u_inv.add_row(i, t, c);
    }

    // col_j += c * col_t on d
    fn add_col(&mut self, j: usize, t: usize, c: &BigInt) {
        self.d.add_col(j, t, c);
        let neg = -c;
        self.v.add_row(t, j, &neg);
        self.v_inv.add_col(j, t, c);
    }

    fn negate_row(&mut self, i: usize) {
        self.d.negate_row(i);
        self.u.negate_col(i);
        self.u_inv.negate_row(i);
    }

    // Diagonalizes the trailing submatrix starting at position `from`,
    // choosing at each step a nonzero pivot of smallest absolute value.
    fn diagonalize_from(&mut self, from: usize) {
        let (m, n) = (self.d.rows(), self.d.cols());
        let mut t = from;
        while t < m.min(n) {
            let Some((pi, pj)) = smallest_pivot(&self.d, t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if self.d[(i, t)].is_zero() {
                        continue;
                    }
                    let q = div_nearest(&self.d[(i, t)], &self.d[(t, t)]);
                    self.add_row(i, t, &-q);
                    if !self.d[(i, t)].is_zero() {
                        // Remainder beats the pivot; promote it.
                        self.swap_rows(t, i);
                        dirty = true;
                    }
                }
                for j in t + 1..n {
                    if self.d[(t, j)].is_zero() {
                        continue;
                    }
                    let q = div_nearest(&self.d[(t, j)], &self.d[(t, t)]);
                    self.add_col(j, t, &-q);
                    if !self.d[(t, j)].is_zero() {
                        self.swap_cols(t, j);
                        dirty = true;
                    }
                }
                if !dirty {
                    break;
                }
            }
            if self.d[(t, t)].is_negative() {
                self.negate_row(t);
            }
            t += 1;
        }
    }
}

/// Computes the Smith normal form of `a`.
pub fn smith_normal_form(a: &IntMatrix) -> Snf {
    let (m, n) = (a.rows(), a.cols());
    let mut st = SnfState {
        d: a.clone(),
        u: IntMatrix::identity(m),
        u_inv: IntMatrix::identity(m),
        v: IntMatrix::identity(n),
        v_inv: IntMatrix::identity(n),
    };
    st.diagonalize_from(0);

    // Enforce the divisibility chain d_i | d_{i+1}: fold d_{i+1} into
    // column i and re-diagonalize; the 2x2 block becomes gcd / lcm.
    let rank = (0..m.min(n)).take_while(|&i| !st.d[(i, i)].is_zero()).count();
    loop {
        let mut clean = true;
        for i in 0..rank.saturating_sub(1) {
            let lo = st.d[(i, i)].clone();
            let hi = st.d[(i + 1, i + 1)].clone();
            if (&hi % &lo).is_zero() {
                continue;
            }
            clean = false;
            st.add_col(i, i + 1, &BigInt::one());
            st.diagonalize_from(i);
        }
        if clean {
            break;
        }
    }

    Snf { d: st.d, u: st.u, u_inv: st.u_inv, v: st.v, v_inv: st.v_inv }
}

fn smallest_pivot(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows() {
        for j in t..d.cols() {
            if d[(i, j)].is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if d[(i, j)].abs() < d[(bi, bj)].abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Rounded division: quotient minimizing |a - q b|.
fn div_nearest(a: &BigInt, b: &BigInt) -> BigInt {
    let (mut q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if r.is_negative() == b.is_negative() {
            q += 1;
        } else {
            q -= 1;
        }
    }
    q
}

/// Row-style Hermite normal form: returns `(H, U)` with `H = U * A`, `U`
/// unimodular, `H` in row echelon form with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`.
pub fn hermite_normal_form(a: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (m, n) = (a.rows(), a.cols());
    let mut h = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut pivot_row = 0;
    for col in 0..n {
        if pivot_row >= m {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pivot_row..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) if h[(i, col)].abs() < h[(b, col)].abs() => Some(i),
                    keep => keep,
                };
            }
            let Some(b) = best else {
                break;
            };
            h.swap_rows(pivot_row, b);
            u.swap_rows(pivot_row, b);
            let mut any = false;
            for i in pivot_row + 1..m {
                if h[(i, col)].is_zero() {
                    continue;
                }
                let q = div_nearest(&h[(i, col)], &h[(pivot_row, col)]);
                let negq = -q;
                h.add_row(i, pivot_row, &negq);
                u.add_row(i, pivot_row, &negq);
                if !h[(i, col)].is_zero() {
                    any = true;
                }
            }
            if !any {
                break;
            }
        }
        if h[(pivot_row, col)].is_zero() {
            continue;
        }
        if h[(pivot_row, col)].is_negative() {
            h.negate_row(pivot_row);
            u.negate_row(pivot_row);
        }
        for i in 0..pivot_row {
            let q = h[(i, col)].div_floor(&h[(pivot_row, col)]);
            let negq = -q;
            h.add_row(i, pivot_row, &negq);
            u.add_row(i, pivot_row, &negq);
        }
        pivot_row += 1;
    }
    (h, u)
}

/// Solves `x * A = b` for integral `x`, where the rows of `A` are
/// Q-linearly independent. Returns `None` if no integral solution exists.
pub fn solve_left(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(a.cols(), b.len());
    let (h, u) = hermite_normal_form(a);
    // x A = b  <=>  (x U^{-1}) H = b; solve y H = b along the pivots, then
    // x = y U.
    let m = a.rows();
    let mut y = vec![BigInt::zero(); m];
    let mut rem: Vec<BigInt> = b.to_vec();
    for i in 0..m {
        let Some(p) = (0..a.cols()).find(|&j| !h[(i, j)].is_zero()) else {
            break;
        };
        let (q, r) = rem[p].div_rem(&h[(i, p)]);
        if !r.is_zero() {
            return None;
        }
        for j in 0..a.cols() {
            let t = &q * &h[(i, j)];
            rem[j] -= t;
        }
        y[i] = q;
    }
    if rem.iter().any(|v| !v.is_zero()) {
        return None;
    }
    let mut x = vec![BigInt::zero(); m];
    for (j, xj) in x.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for (i, yi) in y.iter().enumerate() {
            if !yi.is_zero() {
                acc += yi * &u[(i, j)];
            }
        }
        *xj = acc;
    }
    Some(x)
}

/// Index `[sup : <sub_gens>]` of the sublattice generated by the rows of
/// `sub_gens` inside `sup`.
///
/// Every generator must lie in the Z-span of `sup` (checked). The index is
/// the product of the nonzero elementary divisors of the coordinate matrix,
/// and `Infinite` when the generated sublattice has lower rank than `sup`.
pub fn lattice_index(sup: &SublatticeBasis, sub_gens: &IntMatrix) -> Result<Index, LatticeError> {
    assert_eq!(sub_gens.cols(), sup.ambient_dim());
    let mut coords = IntMatrix::zero(sub_gens.rows(), sup.rank());
    for i in 0..sub_gens.rows() {
        let c = sup.coordinates(sub_gens.row(i)).ok_or(LatticeError::NotASublattice)?;
        for (j, v) in c.into_iter().enumerate() {
            coords[(i, j)] = v;
        }
    }
    let snf = smith_normal_form(&coords);
    if snf.rank() < sup.rank() {
        return Ok(Index::Infinite);
    }
    let mut idx = BigInt::one();
    for d in snf.elementary_divisors() {
        idx *= d;
    }
    Ok(Index::Finite(idx))
}

/// Basis of `{x in ambient : x * A == 0 mod m}`.
///
/// `A` is expressed on ambient coordinates (`ambient_dim x c`). The result is
/// a full-rank sublattice of `ambient` containing `m * ambient`.
pub fn kernel_mod_m_lattice(a: &IntMatrix, m: u64, ambient: &SublatticeBasis) -> SublatticeBasis {
    assert!(m >= 2);
    assert_eq!(a.rows(), ambient.ambient_dim());
    let r = ambient.rank();
    // Condition on coordinates c in Z^r: c * (B A) == 0 mod m. With
    // B A = U D V and y = c U this reads y_i d_i == 0 mod m, since V stays
    // invertible mod m; so y_i runs over multiples of m / gcd(m, d_i).
    let t = ambient.basis_matrix().mul(a);
    let snf = smith_normal_form(&t);
    let big_m = BigInt::from(m);
    let rank = snf.rank();
    let mut y_basis = IntMatrix::zero(r, r);
    for i in 0..r {
        y_basis[(i, i)] = if i < rank {
            let g = snf.d[(i, i)].gcd(&big_m);
            &big_m / g
        } else {
            BigInt::one()
        };
    }
    let c_basis = y_basis.mul(&snf.u_inv);
    let rows = c_basis.mul(ambient.basis_matrix());
    SublatticeBasis::from_rows(ambient.ambient_dim(), rows)
        .expect("kernel basis is full rank by construction")
}

/// Linear constraint over nonnegative integer points: `v . x + offset` must
/// be `>= 0` or `== 0 mod 3`.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub coeffs: Vec<i64>,
    pub relation: Relation,
    pub offset: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    NonNegative,
    ZeroMod3,
}

impl Constraint {
    pub fn nonneg(coeffs: Vec<i64>, offset: i64) -> Self {
        Self { coeffs, relation: Relation::NonNegative, offset }
    }

    pub fn zero_mod3(coeffs: Vec<i64>, offset: i64) -> Self {
        Self { coeffs, relation: Relation::ZeroMod3, offset }
    }
}

/// Outcome of a budgeted enumeration walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WalkOutcome {
    Complete { nodes_visited: u64 },
    BudgetExhausted { nodes_visited: u64 },
}

/// Enumerates all `x in N^dim` with `sum(x) <= cap` satisfying every
/// constraint, returned in the degree order (sum, then lexicographic).
pub fn enumerate_points(dim: usize, cap: i64, constraints: &[Constraint]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let outcome = enumerate_points_visit(dim, cap, constraints, u64::MAX, &mut |p| {
        out.push(p.to_vec());
    });
    debug_assert!(matches!(outcome, WalkOutcome::Complete { .. }));
    out.sort_by(|a, b| degree_cmp(a, b));
    out
}

struct Walk<'a> {
    dim: usize,
    constraints: &'a [Constraint],
    partial: Vec<i64>,
    max_pos_tail: Vec<Vec<i64>>,
    point: Vec<i64>,
    nodes: u64,
    budget: u64,
}

impl Walk<'_> {
    fn rec(&mut self, depth: usize, remaining: i64, visit: &mut dyn FnMut(&[i64])) -> bool {
        self.nodes += 1;
        if self.nodes > self.budget {
            return false;
        }
        // A >= 0 constraint that cannot recover with the remaining budget
        // kills the whole subtree.
        for (ci, c) in self.constraints.iter().enumerate() {
            if c.relation == Relation::NonNegative {
                let best =
                    self.partial[ci] + remaining.saturating_mul(self.max_pos_tail[ci][depth]);
                if best < 0 {
                    return true;
                }
            }
        }
        if depth == self.dim {
            let ok = self.constraints.iter().enumerate().all(|(ci, c)| match c.relation {
                Relation::NonNegative => self.partial[ci] >= 0,
                Relation::ZeroMod3 => self.partial[ci].rem_euclid(3) == 0,
            });
            if ok {
                visit(&self.point);
            }
            return true;
        }
        for v in 0..=remaining {
            self.point[depth] = v;
            for (ci, c) in self.constraints.iter().enumerate() {
                self.partial[ci] += c.coeffs[depth] * v;
            }
            let cont = self.rec(depth + 1, remaining - v, visit);
            for (ci, c) in self.constraints.iter().enumerate() {
                self.partial[ci] -= c.coeffs[depth] * v;
            }
            self.point[depth] = 0;
            if !cont {
                return false;
            }
        }
        true
    }
}

/// Streaming enumeration with a node budget. The visitor receives every
/// point satisfying all constraints; the search tree is walked depth first
/// in coordinate order with pruning on partial sums of `>= 0` constraints.
///
/// When the node budget runs out the walk stops early and reports
/// `BudgetExhausted`; the visited set is then incomplete.
pub fn enumerate_points_visit(
    dim: usize,
    cap: i64,
    constraints: &[Constraint],
    node_budget: u64,
    visit: &mut dyn FnMut(&[i64]),
) -> WalkOutcome {
    assert!(cap >= 0);
    let max_pos_tail: Vec<Vec<i64>> = constraints
        .iter()
        .map(|c| {
            assert_eq!(c.coeffs.len(), dim);
            let mut tails = vec![0i64; dim + 1];
            for i in (0..dim).rev() {
                tails[i] = tails[i + 1].max(c.coeffs[i]).max(0);
            }
            tails
        })
        .collect();
    let mut walk = Walk {
        dim,
        constraints,
        partial: constraints.iter().map(|c| c.offset).collect(),
        max_pos_tail,
        point: vec![0i64; dim],
        nodes: 0,
        budget: node_budget,
    };
    if walk.rec(0, cap, visit) {
        WalkOutcome::Complete { nodes_visited: walk.nodes }
    } else {
        WalkOutcome::BudgetExhausted { nodes_visited: walk.nodes }
    }
}

/// Degree order: `a <= b` iff `(sum(a), a) <=_lex (sum(b), b)`.
pub fn degree_cmp(a: &[i64], b: &[i64]) -> Ordering {
    let sa: i64 = a.iter().sum();
    let sb: i64 = b.iter().sum();
    sa.cmp(&sb).then_with(|| a.cmp(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows_i64(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_snf(a: &IntMatrix) {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(&s.d).mul(&s.v), *a, "A = U D V");
        assert!(s.u.mul(&s.u_inv).is_identity(), "U U^-1 = I");
        assert!(s.v.mul(&s.v_inv).is_identity(), "V V^-1 = I");
        assert_eq!(s.u.det().abs(), BigInt::one(), "U unimodular");
        assert_eq!(s.v.det().abs(), BigInt::one(), "V unimodular");
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let divs = s.elementary_divisors();
        for w in divs.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain");
        }
    }

    #[test]
    fn snf_identity() {
        let a = IntMatrix::identity(3);
        let s = smith_normal_form(&a);
        assert!(s.d.is_identity());
        check_snf(&a);
    }

    #[test]
    fn snf_already_diagonal() {
        let a = m(&[&[2, 0], &[0, 6]]);
        let s = smith_normal_form(&a);
        assert_eq!(s.d[(0, 0)], BigInt::from(2));
        assert_eq!(s.d[(1, 1)], BigInt::from(6));
        check_snf(&a);
    }

    #[test]
    fn snf_hand_example() {
        // Hand reduction gives diag(2, 4); det check: 2 * 4 = |det| = 8.
        let a = m(&[&[2, 4], &[6, 8]]);
        assert_eq!(a.det().abs(), BigInt::from(8));
        let s = smith_normal_form(&a);
        assert_eq!(s.d[(0, 0)], BigInt::from(2));
        assert_eq!(s.d[(1, 1)], BigInt::from(4));
        check_snf(&a);
    }

    #[test]
    fn hermite_solves_membership() {
        let basis = m(&[&[2, 0, 1], &[0, 3, 1]]);
        let lat = SublatticeBasis::from_rows(3, basis).unwrap();
        assert!(lat.contains_i64(&[2, 3, 2]));
        assert!(lat.contains_i64(&[4, 0, 2]));
        assert!(!lat.contains_i64(&[1, 0, 0]));
        let co = lat.coordinates(&[BigInt::from(2), BigInt::from(3), BigInt::from(2)]).unwrap();
        assert_eq!(co, vec![BigInt::one(), BigInt::one()]);
    }

    #[test]
    fn index_two_z_squared() {
        let sup = SublatticeBasis::standard(2);
        let sub = m(&[&[2, 0], &[0, 2]]);
        let idx = lattice_index(&sup, &sub).unwrap();
        assert_eq!(idx, Index::Finite(BigInt::from(4)));
    }

    #[test]
    fn index_from_snf_of_skew_basis() {
        // SNF of [[1,1],[1,-1]] gives divisors (1, 2).
        let sup = SublatticeBasis::standard(2);
        let sub = m(&[&[1, 1], &[1, -1]]);
        let idx = lattice_index(&sup, &sub).unwrap();
        assert_eq!(idx, Index::Finite(BigInt::from(2)));
    }

    #[test]
    fn index_lower_rank_is_infinite() {
        let sup = SublatticeBasis::standard(2);
        let sub = m(&[&[1, 1]]);
        assert_eq!(lattice_index(&sup, &sub).unwrap(), Index::Infinite);
    }

    #[test]
    fn index_rejects_outsider() {
        let sup = SublatticeBasis::from_rows(2, m(&[&[2, 0], &[0, 2]])).unwrap();
        let sub = m(&[&[1, 0], &[0, 2]]);
        assert_eq!(lattice_index(&sup, &sub), Err(LatticeError::NotASublattice));
    }

    #[test]
    fn kernel_zero_map_is_ambient() {
        let amb = SublatticeBasis::standard(2);
        let a = IntMatrix::zero(2, 1);
        let k = kernel_mod_m_lattice(&a, 3, &amb);
        let idx = lattice_index(&amb, k.basis_matrix()).unwrap();
        assert_eq!(idx, Index::Finite(BigInt::one()));
    }

    #[test]
    fn kernel_mod3_line() {
        let amb = SublatticeBasis::standard(1);
        let a = m(&[&[1]]);
        let k = kernel_mod_m_lattice(&a, 3, &amb);
        assert_eq!(k.rank(), 1);
        assert!(k.contains_i64(&[3]));
        assert!(!k.contains_i64(&[1]));
    }

    #[test]
    fn kernel_mod3_diagonal_matches_class_count() {
        // Oracle: count classes of Z^2 / 3Z^2 in the kernel; index must be
        // 9 / (number of kernel classes) = 3.
        let amb = SublatticeBasis::standard(2);
        let a = m(&[&[1], &[1]]);
        let k = kernel_mod_m_lattice(&a, 3, &amb);
        let mut kernel_classes = 0;
        for x in 0..3i64 {
            for y in 0..3i64 {
                if (x + y) % 3 == 0 {
                    kernel_classes += 1;
                }
            }
        }
        assert_eq!(kernel_classes, 3);
        let idx = lattice_index(&amb, k.basis_matrix()).unwrap();
        assert_eq!(idx, Index::Finite(BigInt::from(9 / kernel_classes)));
        assert!(k.contains_i64(&[1, -1]));
        assert!(k.contains_i64(&[0, 3]));
    }

    #[test]
    fn enumerate_unconstrained() {
        let pts = enumerate_points(2, 1, &[]);
        assert_eq!(pts, vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn enumerate_halfplane() {
        let c = Constraint::nonneg(vec![1, -1], 0);
        let pts = enumerate_points(2, 1, &[c]);
        assert_eq!(pts, vec![vec![0, 0], vec![1, 0]]);
    }

    #[test]
    fn enumerate_against_brute_force() {
        // Mixed constraint shapes, dim 3, cap 6; compare with an unpruned
        // filter over the whole box.
        let cs = vec![
            Constraint::nonneg(vec![2, -1, -1], 1),
            Constraint::zero_mod3(vec![1, 1, 2], 0),
        ];
        let fast = enumerate_points(3, 6, &cs);
        let mut brute = Vec::new();
        for a in 0..=6i64 {
            for b in 0..=6i64 {
                for c in 0..=6i64 {
                    if a + b + c > 6 {
                        continue;
                    }
                    if 2 * a - b - c + 1 < 0 {
                        continue;
                    }
                    if (a + b + 2 * c).rem_euclid(3) != 0 {
                        continue;
                    }
                    brute.push(vec![a, b, c]);
                }
            }
        }
        brute.sort_by(|a, b| degree_cmp(a, b));
        assert_eq!(fast, brute);
    }

    #[test]
    fn enumeration_budget_reports_exhaustion() {
        let out = enumerate_points_visit(4, 10, &[], 5, &mut |_| {});
        assert!(matches!(out, WalkOutcome::BudgetExhausted { .. }));
    }

    proptest! {
        #[test]
        fn snf_random(rows in 1usize..5, cols in 1usize..5, seed in any::<u64>()) {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let mut a = IntMatrix::zero(rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    a[(i, j)] = BigInt::from(rng.range_i64(-9, 9));
                }
            }
            check_snf(&a);
        }

        #[test]
        fn scaled_lattice_index_is_power(mscale in 1i64..6, rank in 1usize..5) {
            let sup = SublatticeBasis::standard(rank);
            let mut gens = IntMatrix::zero(rank, rank);
            for i in 0..rank {
                gens[(i, i)] = BigInt::from(mscale);
            }
            let idx = lattice_index(&sup, &gens).unwrap();
            let expect = BigInt::from(mscale).pow(rank as u32);
            prop_assert_eq!(idx, Index::Finite(expect));
        }

        #[test]
        fn kernel_index_divides_m_pow_c(seed in any::<u64>(), c in 1usize..3) {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let n = 3usize;
            let mut a = IntMatrix::zero(n, c);
            for i in 0..n {
                for j in 0..c {
                    a[(i, j)] = BigInt::from(rng.range_i64(-4, 4));
                }
            }
            let amb = SublatticeBasis::standard(n);
            let m = 6u64;
            let k = kernel_mod_m_lattice(&a, m, &amb);
            let idx = lattice_index(&amb, k.basis_matrix()).unwrap();
            let idx = idx.finite().unwrap().clone();
            let m_pow_c = BigInt::from(m).pow(c as u32);
            prop_assert!((&m_pow_c % &idx).is_zero(), "index {} must divide {}", idx, m_pow_c);
            for i in 0..n {
                let mut v = vec![0i64; n];
                v[i] = m as i64;
                prop_assert!(k.contains_i64(&v));
            }
        }
    }
}
