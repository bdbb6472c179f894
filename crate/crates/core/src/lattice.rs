//! Full-rank sublattices of Z^n: bases, Hermite normal form, enumeration by
//! index, congruence canonicalization and exact closest-point searches.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_ball::{iroot, pow_norm_saturating, PowRadius};

/// Largest dimension handled by the lattice routines.
pub const MAX_DIM: usize = 4;

// HNF is computed modulo the determinant in i128; products of two reduced
// entries must stay below 2^126.
const MAX_MODULAR_DET: u64 = 1 << 62;

/// An integer generator matrix whose rows span a full-rank lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct LatticeBasis {
    rows: Vec<Vec<i64>>,
    det: u64,
}

impl LatticeBasis {
    pub fn new(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || n > MAX_DIM {
            return Err(Error::DimensionUnsupported { dim: n, supported: "1..=4" });
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("basis must be a square {n}x{n} matrix")));
        }
        let det = determinant(&rows);
        if det.is_zero() {
            return Err(Error::SingularMatrix);
        }
        let det = det.abs().to_u64().ok_or(Error::Overflow("determinant"))?;
        Ok(LatticeBasis { rows, det })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `|det B|`, the index of the lattice in Z^n.
    pub fn det(&self) -> u64 {
        self.det
    }

    pub fn signed_det(&self) -> BigInt {
        determinant(&self.rows)
    }

    /// Image of the lattice under a signed coordinate permutation.
    pub fn transformed(&self, t: &SignedPermutation) -> LatticeBasis {
        LatticeBasis {
            rows: self.rows.iter().map(|r| t.apply(r)).collect(),
            det: self.det,
        }
    }
}

impl TryFrom<Vec<Vec<i64>>> for LatticeBasis {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        LatticeBasis::new(rows)
    }
}

impl From<LatticeBasis> for Vec<Vec<i64>> {
    fn from(b: LatticeBasis) -> Self {
        b.rows
    }
}

impl fmt::Display for LatticeBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_rows(f, &self.rows)
    }
}

fn write_rows(f: &mut fmt::Formatter<'_>, rows: &[Vec<i64>]) -> fmt::Result {
    for (i, r) in rows.iter().enumerate() {
        if i > 0 {
            f.write_str(";")?;
        }
        for (j, x) in r.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
    }
    Ok(())
}

/// A basis in row-style Hermite normal form: upper triangular, positive
/// diagonal `d_j`, and `0 <= b[i][j] < d_j` above the diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<i64>>", into = "Vec<Vec<i64>>")]
pub struct HnfBasis(LatticeBasis);

impl HnfBasis {
    /// Accepts rows that are already in Hermite normal form.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let basis = LatticeBasis::new(rows)?;
        if !is_hnf(basis.rows()) {
            return Err(Error::invalid(format!("{basis} is not in Hermite normal form")));
        }
        Ok(HnfBasis(basis))
    }

    fn from_valid_rows(rows: Vec<Vec<i64>>) -> Self {
        debug_assert!(is_hnf(&rows));
        let det = rows.iter().enumerate().map(|(i, r)| r[i] as u64).product();
        HnfBasis(LatticeBasis { rows, det })
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.0
    }

    pub fn into_basis(self) -> LatticeBasis {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        self.0.rows()
    }

    pub fn det(&self) -> u64 {
        self.0.det()
    }

    pub fn diagonal(&self) -> Vec<i64> {
        self.rows().iter().enumerate().map(|(i, r)| r[i]).collect()
    }

    /// Row-major entries, the key for the lexicographic canonical order.
    pub fn entries(&self) -> impl Iterator<Item = i64> + '_ {
        self.rows().iter().flatten().copied()
    }

    /// Total order used for reports: determinant first, then row-major entries.
    pub fn report_cmp(&self, other: &HnfBasis) -> Ordering {
        self.det()
            .cmp(&other.det())
            .then_with(|| self.entries().cmp(other.entries()))
    }

    /// The representative of `x + Λ` inside the box `[0, d_1) × … × [0, d_n)`.
    pub fn reduce(&self, x: &[i64]) -> Vec<i64> {
        let mut y = x.to_vec();
        for (j, row) in self.rows().iter().enumerate() {
            let q = y[j].div_euclid(row[j]);
            if q != 0 {
                for k in j..y.len() {
                    y[k] -= q * row[k];
                }
            }
        }
        y
    }

    /// Mixed-radix index in `[0, det)` of the coset containing `x`.
    pub fn coset_index(&self, x: &[i64]) -> u64 {
        let y = self.reduce(x);
        let mut idx = 0u64;
        for (j, row) in self.rows().iter().enumerate() {
            idx = idx * row[j] as u64 + y[j] as u64;
        }
        idx
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        self.reduce(x).iter().all(|&c| c == 0)
    }
}

impl TryFrom<Vec<Vec<i64>>> for HnfBasis {
    type Error = Error;
    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self> {
        HnfBasis::from_rows(rows)
    }
}

impl From<HnfBasis> for Vec<Vec<i64>> {
    fn from(b: HnfBasis) -> Self {
        b.0.rows
    }
}

impl fmt::Display for HnfBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn is_hnf(rows: &[Vec<i64>]) -> bool {
    let n = rows.len();
    (0..n).all(|i| {
        rows[i][i] > 0
            && (0..i).all(|j| rows[i][j] == 0)
            && (i + 1..n).all(|j| (0..rows[j][j]).contains(&rows[i][j]))
    })
}

/// Parses a basis from JSON rows (`[[1,5],[0,24]]`) or the compact form `1,5;0,24`.
pub fn parse_basis(text: &str) -> Result<LatticeBasis> {
    let t = text.trim();
    let rows: Vec<Vec<i64>> = if t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| Error::invalid(format!("basis JSON: {e}")))?
    } else {
        t.split(';')
            .map(|row| {
                row.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<i64>()
                            .map_err(|_| Error::invalid(format!("bad basis entry {x:?}")))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?
    };
    LatticeBasis::new(rows)
}

/// Exact determinant; native 128-bit arithmetic with a big-integer fallback.
pub fn determinant(rows: &[Vec<i64>]) -> BigInt {
    let wide: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    match bareiss_i128(wide) {
        Some(d) => BigInt::from(d),
        None => bareiss_big(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()),
    }
}

fn bareiss_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| m[i][k] != 0)?;
            m.swap(k, swap);
            sign = -sign;
            if m[k][k] == 0 {
                return Some(0);
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k])?;
                let b = m[i][k].checked_mul(m[k][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
        }
        prev = m[k][k];
    }
    if n == 0 {
        return Some(1);
    }
    sign.checked_mul(m[n - 1][n - 1])
}

fn bareiss_big(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut negate = false;
    let mut prev = BigInt::from(1);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate { -d } else { d }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Hermite normal form of the row span, computed modulo `|det B|`.
pub fn hnf(b: &LatticeBasis) -> Result<HnfBasis> {
    let n = b.dim();
    let det = b.det();
    if det >= MAX_MODULAR_DET {
        return Err(Error::Overflow("hermite normal form modulus"));
    }
    let m = det as i128;
    let mut pool: Vec<Vec<i128>> = b
        .rows()
        .iter()
        .map(|r| r.iter().map(|&x| (x as i128).rem_euclid(m)).collect())
        .collect();
    let mut out: Vec<Vec<i128>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut pivot = vec![0i128; n];
        pivot[j] = m;
        for row in pool.iter_mut() {
            if row[j] == 0 {
                continue;
            }
            let (g, u, v) = ext_gcd(pivot[j], row[j]);
            let (a, c) = (row[j] / g, pivot[j] / g);
            let mut new_pivot = vec![0i128; n];
            let mut new_row = vec![0i128; n];
            for k in j + 1..n {
                new_pivot[k] = (u * pivot[k] + v * row[k]).rem_euclid(m);
                new_row[k] = (a * pivot[k] - c * row[k]).rem_euclid(m);
            }
            new_pivot[j] = g;
            pivot = new_pivot;
            *row = new_row;
        }
        // (m / g) * pivot - m * e_j keeps the pool spanning the lattice
        let scale = m / pivot[j];
        let mut extra = vec![0i128; n];
        for k in j + 1..n {
            extra[k] = (scale * pivot[k]).rem_euclid(m);
        }
        pool.push(extra);
        out.push(pivot);
    }
    for j in 0..n {
        let d = out[j][j];
        for i in 0..j {
            let q = out[i][j].div_euclid(d);
            if q != 0 {
                for k in j..n {
                    out[i][k] -= q * out[j][k];
                }
            }
        }
    }
    let rows: Vec<Vec<i64>> = out
        .into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect();
    let h = HnfBasis::from_valid_rows(rows);
    debug_assert_eq!(h.det(), det);
    Ok(h)
}

/// Adjugate matrix `Adj` with `B · Adj = det(B) · I`.
pub fn adjugate(b: &LatticeBasis) -> Result<Vec<Vec<i64>>> {
    let n = b.dim();
    if n == 1 {
        return Ok(vec![vec![1]]);
    }
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| (0..n).filter(|&c| c != j).map(|c| b.rows()[r][c]).collect())
                .collect();
            let mut cof = determinant(&minor);
            if (i + j) % 2 == 1 {
                cof = -cof;
            }
            adj[j][i] = cof.to_i64().ok_or(Error::Overflow("adjugate"))?;
        }
    }
    Ok(adj)
}

/// Number of index-`m` sublattices of Z^n: the sum over ordered
/// factorizations `d_1⋯d_n = m` of `∏ d_j^(j-1)`.
pub fn count_sublattices(n: usize, m: u64) -> u64 {
    fn rec(level: usize, n: usize, rest: u64, weight: u64) -> u64 {
        if level + 1 == n {
            return weight * rest.pow(level as u32);
        }
        divisors(rest)
            .into_iter()
            .map(|d| rec(level + 1, n, rest / d, weight * d.pow(level as u32)))
            .sum()
    }
    rec(0, n, m, 1)
}

pub fn divisors(m: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= m {
        if m.is_multiple_of(d) {
            small.push(d);
            if d * d != m {
                large.push(m / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Calls `visit` once for every sublattice of Z^n of index `m`, given by its HNF.
pub fn for_each_sublattice(n: usize, m: u64, mut visit: impl FnMut(&HnfBasis)) -> Result<()> {
    if !(1..=MAX_DIM).contains(&n) {
        return Err(Error::DimensionUnsupported { dim: n, supported: "1..=4" });
    }
    if m == 0 {
        return Err(Error::invalid("lattice volume must be positive"));
    }
    let mut diag = vec![0u64; n];
    let mut sink = |d: &[u64]| visit_offsets(d, &mut visit);
    factorizations(0, m, &mut diag, &mut sink);
    Ok(())
}

fn factorizations(level: usize, rest: u64, diag: &mut [u64], sink: &mut impl FnMut(&[u64])) {
    if level + 1 == diag.len() {
        diag[level] = rest;
        sink(diag);
        return;
    }
    for d in divisors(rest) {
        diag[level] = d;
        factorizations(level + 1, rest / d, diag, sink);
    }
}

fn visit_offsets(diag: &[u64], visit: &mut impl FnMut(&HnfBasis)) {
    let n = diag.len();
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut rows: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { diag[i] as i64 } else { 0 }).collect())
        .collect();
    loop {
        visit(&HnfBasis::from_valid_rows(rows.clone()));
        // odometer over the off-diagonal slots, last slot fastest
        let mut k = slots.len();
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            let (i, j) = slots[k];
            if rows[i][j] + 1 < diag[j] as i64 {
                rows[i][j] += 1;
                break;
            }
            rows[i][j] = 0;
        }
    }
}

/// Every sublattice of Z^n with index `m`, as HNF bases.
pub fn enumerate_sublattices(n: usize, m: u64) -> Result<Vec<HnfBasis>> {
    let mut out = Vec::new();
    for_each_sublattice(n, m, |h| out.push(h.clone()))?;
    Ok(out)
}

/// A coordinate permutation composed with sign changes:
/// `(T x)_k = sign_k · x_{perm_k}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedPermutation {
    perm: Vec<usize>,
    signs: Vec<i64>,
}

impl SignedPermutation {
    pub fn new(perm: Vec<usize>, signs: Vec<i64>) -> Self {
        assert_eq!(perm.len(), signs.len());
        SignedPermutation { perm, signs }
    }

    pub fn apply(&self, x: &[i64]) -> Vec<i64> {
        self.perm.iter().zip(&self.signs).map(|(&p, &s)| s * x[p]).collect()
    }

    /// All `2^n · n!` signed permutations of `n` coordinates.
    pub fn all(n: usize) -> Vec<SignedPermutation> {
        let mut perms = Vec::new();
        permutations(&mut (0..n).collect::<Vec<_>>(), 0, &mut perms);
        let mut out = Vec::with_capacity(perms.len() << n);
        for perm in perms {
            for mask in 0u32..(1 << n) {
                let signs = (0..n).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect();
                out.push(SignedPermutation { perm: perm.clone(), signs });
            }
        }
        out
    }
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Lexicographically smallest HNF over all signed-permutation images of the
/// lattice; two lattices are congruent iff these agree.
pub fn canonical_congruence_form(b: &LatticeBasis) -> Result<HnfBasis> {
    let mut best: Option<HnfBasis> = None;
    for t in SignedPermutation::all(b.dim()) {
        let h = hnf(&b.transformed(&t))?;
        if best.as_ref().is_none_or(|cur| h.entries().lt(cur.entries())) {
            best = Some(h);
        }
    }
    Ok(best.expect("at least the identity transform"))
}

/// One representative per coset of Λ in Z^n: the box spanned by the HNF diagonal.
pub fn coset_representatives(b: &HnfBasis) -> Vec<Vec<i64>> {
    let diag = b.diagonal();
    let n = diag.len();
    let mut out = Vec::with_capacity(b.det() as usize);
    let mut x = vec![0i64; n];
    loop {
        out.push(x.clone());
        let mut k = n;
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            if x[k] + 1 < diag[k] {
                x[k] += 1;
                break;
            }
            x[k] = 0;
        }
    }
}

/// Minimum of `Σ|v_i|^p` over nonzero lattice vectors.
pub fn shortest_vector_pow(b: &LatticeBasis, p: u32) -> Result<PowRadius> {
    let h = hnf(b)?;
    Ok(PowRadius(shortest_in_hnf(&h, p)))
}

pub(crate) fn shortest_in_hnf(h: &HnfBasis, p: u32) -> u64 {
    let seed = h.rows().iter().map(|r| pow_norm_saturating(r, p)).min().expect("nonempty basis");
    let target = vec![0i64; h.dim()];
    TriangularSearch::new(h, p, &target, true).run(seed)
}

/// Minimum of `Σ|x_i - v_i|^p` over lattice points `v`.
pub fn closest_lattice_distance_pow(b: &LatticeBasis, p: u32, x: &[i64]) -> Result<PowRadius> {
    if x.len() != b.dim() {
        return Err(Error::invalid("point dimension does not match the lattice"));
    }
    let h = hnf(b)?;
    Ok(PowRadius(closest_in_hnf(&h, p, x)))
}

pub(crate) fn closest_in_hnf(h: &HnfBasis, p: u32, x: &[i64]) -> u64 {
    // seed with the coset offset reduced to the centered box
    let mut y = x.to_vec();
    for (j, row) in h.rows().iter().enumerate() {
        let d = row[j];
        let q = (2 * y[j] + d).div_euclid(2 * d);
        if q != 0 {
            for k in j..y.len() {
                y[k] -= q * row[k];
            }
        }
    }
    let seed = pow_norm_saturating(&y, p);
    if seed == 0 {
        return 0;
    }
    TriangularSearch::new(h, p, x, false).run(seed)
}

/// Exhaustive enumeration of `v = Σ u_j h_j` coordinate by coordinate; the
/// triangular shape fixes `v_j` once `u_0..u_j` are chosen.
struct TriangularSearch<'a> {
    rows: &'a [Vec<i64>],
    p: u32,
    target: &'a [i64],
    exclude_zero: bool,
    best: u64,
}

impl<'a> TriangularSearch<'a> {
    fn new(h: &'a HnfBasis, p: u32, target: &'a [i64], exclude_zero: bool) -> Self {
        TriangularSearch { rows: h.rows(), p, target, exclude_zero, best: u64::MAX }
    }

    fn run(mut self, seed: u64) -> u64 {
        self.best = seed;
        let mut acc = vec![0i64; self.rows.len()];
        self.descend(0, 0, false, &mut acc);
        self.best
    }

    fn descend(&mut self, j: usize, partial: u64, nonzero: bool, acc: &mut Vec<i64>) {
        let n = self.rows.len();
        if j == n {
            if nonzero || !self.exclude_zero {
                self.best = partial;
            }
            return;
        }
        if partial >= self.best {
            return;
        }
        let rho = iroot(self.best - partial - 1, self.p) as i64;
        let d = self.rows[j][j];
        let offset = self.target[j] - acc[j];
        let lo = (offset - rho).div_euclid(d) + i64::from((offset - rho).rem_euclid(d) != 0);
        let hi = (offset + rho).div_euclid(d);
        for u in lo..=hi {
            let gap = (offset - u * d).unsigned_abs();
            let Some(cost) = gap.checked_pow(self.p) else { continue };
            let next = partial.saturating_add(cost);
            if next >= self.best {
                continue;
            }
            if u != 0 {
                for k in j..n {
                    acc[k] += u * self.rows[j][k];
                }
            }
            self.descend(j + 1, next, nonzero || u != 0, acc);
            if u != 0 {
                for k in j..n {
                    acc[k] -= u * self.rows[j][k];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(rows: &[&[i64]]) -> LatticeBasis {
        LatticeBasis::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn hnf_rows(rows: &[&[i64]]) -> Vec<Vec<i64>> {
        hnf(&basis(rows)).unwrap().rows().to_vec()
    }

    #[test]
    fn singular_is_rejected() {
        assert_eq!(
            LatticeBasis::new(vec![vec![1, 2], vec![2, 4]]),
            Err(Error::SingularMatrix)
        );
        assert!(matches!(
            LatticeBasis::new(vec![vec![1; 5]; 5]),
            Err(Error::DimensionUnsupported { .. })
        ));
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(hnf_rows(&[&[1, 0], &[0, 1]]), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(hnf_rows(&[&[0, 24], &[1, 4]]), vec![vec![1, 4], vec![0, 24]]);
        let h = hnf(&basis(&[&[3, 5], &[6, -1]])).unwrap();
        assert_eq!(h.det(), 33);
        assert_eq!(hnf(h.basis()).unwrap(), h);
        // (3,5) and (0,-11) = (6,-1) - 2(3,5) generate the same lattice
        assert_eq!(h.rows(), &[vec![3, 5], vec![0, 11]]);
        assert_eq!(hnf_rows(&[&[5, 11], &[13, 1]]), vec![vec![1, 85], vec![0, 138]]);
    }

    #[test]
    fn hnf_membership_matches_span() {
        let b = basis(&[&[4, 1, 7], &[2, -3, 5], &[0, 6, 1]]);
        let h = hnf(&b).unwrap();
        for r in b.rows() {
            assert!(h.contains(r));
        }
        for r in h.rows() {
            // every HNF row is an integer combination of the original rows:
            // r · Adj ≡ 0 (mod det)
            let adj = adjugate(&b).unwrap();
            let det = b.det() as i64;
            for c in 0..3 {
                let s: i64 = (0..3).map(|k| r[k] * adj[k][c]).sum();
                assert_eq!(s.rem_euclid(det), 0);
            }
        }
    }

    #[test]
    fn adjugate_examples() {
        assert_eq!(adjugate(&basis(&[&[1, 0], &[0, 1]])).unwrap(), vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(adjugate(&basis(&[&[1, 5], &[0, 24]])).unwrap(), vec![vec![24, -5], vec![0, 1]]);
        assert_eq!(adjugate(&basis(&[&[2, 0], &[0, 12]])).unwrap(), vec![vec![12, 0], vec![0, 2]]);
        let b = basis(&[&[2, 1, 0, 3], &[1, -1, 4, 0], &[0, 2, 1, 1], &[5, 0, 0, 1]]);
        let adj = adjugate(&b).unwrap();
        let det = b.signed_det().to_i64().unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let s: i64 = (0..4).map(|k| b.rows()[i][k] * adj[k][j]).sum();
                assert_eq!(s, if i == j { det } else { 0 });
            }
        }
    }

    #[test]
    fn determinant_fallback_is_exact() {
        let big = i64::MAX / 3;
        let rows = vec![
            vec![big, 1, 0, 0],
            vec![0, big, 1, 0],
            vec![0, 0, big, 1],
            vec![1, 0, 0, big],
        ];
        let b = BigInt::from(big);
        assert_eq!(determinant(&rows), b.pow(4u32) - 1);
    }

    #[test]
    fn sublattice_counts() {
        assert_eq!(enumerate_sublattices(2, 24).unwrap().len(), 60);
        assert_eq!(
            enumerate_sublattices(2, 1).unwrap(),
            vec![HnfBasis::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap()]
        );
        assert_eq!(enumerate_sublattices(3, 4).unwrap().len(), 35);
        assert_eq!(count_sublattices(3, 4), 35);
        assert_eq!(count_sublattices(1, 9), 1);
        let all = enumerate_sublattices(3, 12).unwrap();
        let mut uniq = all.clone();
        uniq.sort_by(|a, b| a.report_cmp(b));
        uniq.dedup();
        assert_eq!(uniq.len(), all.len());
        assert!(all.iter().all(|h| h.det() == 12));
    }

    #[test]
    fn canonical_form_examples() {
        let a = canonical_congruence_form(&basis(&[&[1, 5], &[0, 24]])).unwrap();
        let b = canonical_congruence_form(&basis(&[&[1, 19], &[0, 24]])).unwrap();
        assert_eq!(a, b);
        let c = canonical_congruence_form(&basis(&[&[4, 0], &[0, 6]])).unwrap();
        let d = canonical_congruence_form(&basis(&[&[6, 0], &[0, 4]])).unwrap();
        assert_eq!(c, d);
        assert_ne!(a, canonical_congruence_form(&basis(&[&[1, 4], &[0, 24]])).unwrap());
    }

    #[test]
    fn shortest_vectors() {
        assert_eq!(shortest_vector_pow(&basis(&[&[1, 0], &[0, 1]]), 2).unwrap(), PowRadius(1));
        assert_eq!(shortest_vector_pow(&basis(&[&[1, 4], &[0, 24]]), 2).unwrap(), PowRadius(17));
        assert_eq!(shortest_vector_pow(&basis(&[&[1, 5], &[0, 24]]), 2).unwrap(), PowRadius(26));
    }

    #[test]
    fn coset_representative_boxes() {
        let id = HnfBasis::from_rows(vec![vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(coset_representatives(&id), vec![vec![0, 0]]);
        let h = HnfBasis::from_rows(vec![vec![1, 5], vec![0, 24]]).unwrap();
        let reps = coset_representatives(&h);
        assert_eq!(reps.len(), 24);
        assert!(reps.iter().enumerate().all(|(k, r)| r == &vec![0, k as i64]));
        for a in &reps {
            for b in &reps {
                let diff: Vec<i64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
                assert_eq!(h.contains(&diff), a == b);
            }
        }
        let idx: Vec<u64> = reps.iter().map(|r| h.coset_index(r)).collect();
        assert_eq!(idx, (0..24).collect::<Vec<_>>());
    }

    #[test]
    fn closest_points() {
        let b = basis(&[&[5, 11], &[13, 1]]);
        assert_eq!(closest_lattice_distance_pow(&b, 2, &[18, 12]).unwrap(), PowRadius(0));
        let h = hnf(&b).unwrap();
        let deepest = coset_representatives(&h)
            .iter()
            .map(|x| closest_in_hnf(&h, 2, x))
            .max()
            .unwrap();
        assert_eq!(deepest, 50);
        let d = basis(&[&[1, 0], &[0, 24]]);
        assert_eq!(closest_lattice_distance_pow(&d, 2, &[0, 12]).unwrap(), PowRadius(144));
    }

    #[test]
    fn basis_parsing() {
        let a = parse_basis("[[1,5],[0,24]]").unwrap();
        let b = parse_basis("1,5;0,24").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1,5;0,24");
        assert!(parse_basis("1,5;0").is_err());
        assert!(parse_basis("[[1,2],[2,4]]").is_err());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, "[[1,5],[0,24]]");
    }

    #[test]
    fn hnf_basis_rejects_non_normal_rows() {
        assert!(HnfBasis::from_rows(vec![vec![1, 24], vec![0, 24]]).is_err());
        assert!(HnfBasis::from_rows(vec![vec![1, 0], vec![1, 24]]).is_err());
    }
}
