//! Integer points of ℓ_p balls and the set of attainable ℓ_p distances.
//!
//! Every radius is carried as the integer `s = r^p` ([`PowRadius`]), so ball
//! membership and radius comparisons never touch floating point.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A radius `r` stored exactly as `s = r^p` for the ambient exponent `p`.
#[derive(
    Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
#[serde(transparent)]
pub struct PowRadius(pub u64);

impl PowRadius {
    pub const ZERO: PowRadius = PowRadius(0);

    pub fn get(self) -> u64 {
        self.0
    }

    /// The radius itself, `s^(1/p)`.
    pub fn radius(self, p: u32) -> f64 {
        (self.0 as f64).powf(1.0 / f64::from(p))
    }
}

impl fmt::Display for PowRadius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u64> for PowRadius {
    fn from(s: u64) -> Self {
        PowRadius(s)
    }
}

/// Largest `a` with `a^p <= s`.
pub fn iroot(s: u64, p: u32) -> u64 {
    assert!(p >= 1, "exponent must be positive");
    if p == 1 || s < 2 {
        return s;
    }
    let mut a = (s as f64).powf(1.0 / f64::from(p)) as u64;
    while a > 0 && a.checked_pow(p).is_none_or(|v| v > s) {
        a -= 1;
    }
    while (a + 1).checked_pow(p).is_some_and(|v| v <= s) {
        a += 1;
    }
    a
}

/// `Σ |v_i|^p`, or `None` on overflow.
pub fn pow_norm(v: &[i64], p: u32) -> Option<u64> {
    v.iter().try_fold(0u64, |acc, &x| {
        x.unsigned_abs()
            .checked_pow(p)
            .and_then(|t| acc.checked_add(t))
    })
}

/// `Σ |v_i|^p`, saturating at `u64::MAX`.
pub fn pow_norm_saturating(v: &[i64], p: u32) -> u64 {
    pow_norm(v, p).unwrap_or(u64::MAX)
}

fn check_np(n: usize, p: u32) {
    assert!(n >= 1, "dimension must be at least 1");
    assert!(p >= 1, "exponent must be at least 1");
}

/// True iff `s` is a sum of exactly `n` p-th powers of nonnegative integers.
pub fn is_representable(n: usize, p: u32, s: PowRadius) -> bool {
    check_np(n, p);
    representable_below(n, p, s.0, iroot(s.0, p))
}

// Parts are taken in nonincreasing order, so the largest part `a` must
// satisfy n * a^p >= s.
fn representable_below(n: usize, p: u32, s: u64, max_part: u64) -> bool {
    if s == 0 {
        return true;
    }
    if n == 1 {
        let a = iroot(s, p);
        return a <= max_part && a.pow(p) == s;
    }
    let mut a = iroot(s, p).min(max_part);
    loop {
        let ap = a.pow(p);
        if (ap as u128) * (n as u128) < s as u128 {
            return false;
        }
        if representable_below(n - 1, p, s - ap, a) {
            return true;
        }
        if a == 0 {
            return false;
        }
        a -= 1;
    }
}

/// The distance set `D_{p,n}` truncated at an inclusive limit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceSet {
    n: usize,
    p: u32,
    limit: PowRadius,
    elements: Vec<PowRadius>,
}

impl DistanceSet {
    pub fn new(n: usize, p: u32, limit: PowRadius) -> Self {
        check_np(n, p);
        let elements = if prefer_sieve(n, p, limit.0) {
            sieve_sums(n, p, limit.0)
        } else {
            enumerate_sums(n, p, limit.0)
        };
        DistanceSet {
            n,
            p,
            limit,
            elements: elements.into_iter().map(PowRadius).collect(),
        }
    }

    /// Builds the set by n-fold convolution of the p-th power indicator.
    pub fn by_sieve(n: usize, p: u32, limit: PowRadius) -> Self {
        check_np(n, p);
        let elements = sieve_sums(n, p, limit.0).into_iter().map(PowRadius).collect();
        DistanceSet { n, p, limit, elements }
    }

    /// Builds the set by listing every nonincreasing tuple of parts.
    pub fn by_enumeration(n: usize, p: u32, limit: PowRadius) -> Self {
        check_np(n, p);
        let elements = enumerate_sums(n, p, limit.0)
            .into_iter()
            .map(PowRadius)
            .collect();
        DistanceSet { n, p, limit, elements }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> u32 {
        self.p
    }

    pub fn limit(&self) -> PowRadius {
        self.limit
    }

    pub fn elements(&self) -> &[PowRadius] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, s: PowRadius) -> bool {
        if s > self.limit {
            return is_representable(self.n, self.p, s);
        }
        self.elements.binary_search(&s).is_ok()
    }

    /// Smallest element strictly greater than `s`.
    pub fn successor(&self, s: PowRadius) -> Result<PowRadius> {
        let idx = self.elements.partition_point(|&e| e <= s);
        self.elements
            .get(idx)
            .copied()
            .ok_or(Error::LimitExceeded {
                requested: s.0.saturating_add(1),
                limit: self.limit.0,
            })
    }

    /// Largest element strictly smaller than `s`.
    pub fn predecessor(&self, s: PowRadius) -> Option<PowRadius> {
        let idx = self.elements.partition_point(|&e| e < s);
        idx.checked_sub(1).map(|i| self.elements[i])
    }

    /// Largest element `<= x`; `x` must not exceed the limit.
    pub fn floor(&self, x: PowRadius) -> Result<PowRadius> {
        if x > self.limit {
            return Err(Error::LimitExceeded { requested: x.0, limit: self.limit.0 });
        }
        let idx = self.elements.partition_point(|&e| e <= x);
        Ok(self.elements[idx - 1])
    }

    /// `#(D ∩ [a, b))`.
    pub fn gap_count(&self, a: PowRadius, b: PowRadius) -> Result<usize> {
        if b > self.limit {
            return Err(Error::LimitExceeded { requested: b.0, limit: self.limit.0 });
        }
        if b <= a {
            return Ok(0);
        }
        let lo = self.elements.partition_point(|&e| e < a);
        let hi = self.elements.partition_point(|&e| e < b);
        Ok(hi - lo)
    }
}

fn prefer_sieve(n: usize, p: u32, limit: u64) -> bool {
    let roots = iroot(limit, p) as f64 + 1.0;
    let sieve_cost = n as f64 * (limit as f64 + 1.0) * roots;
    let factorial: f64 = (1..=n).map(|k| k as f64).product();
    let enum_cost = roots.powi(n as i32) / factorial;
    sieve_cost <= enum_cost && limit < (1 << 26)
}

fn sieve_sums(n: usize, p: u32, limit: u64) -> Vec<u64> {
    let len = usize::try_from(limit).expect("sieve limit exceeds address space") + 1;
    let powers: Vec<usize> = (0..=iroot(limit, p)).map(|a| a.pow(p) as usize).collect();
    let mut reach = vec![false; len];
    reach[0] = true;
    for _ in 0..n {
        let mut next = vec![false; len];
        for s in (0..len).filter(|&s| reach[s]) {
            for &q in powers.iter().take_while(|&&q| s + q < len) {
                next[s + q] = true;
            }
        }
        reach = next;
    }
    (0..len as u64).filter(|&s| reach[s as usize]).collect()
}

fn enumerate_sums(n: usize, p: u32, limit: u64) -> Vec<u64> {
    fn rec(parts_left: usize, p: u32, budget: u64, max_part: u64, acc: u64, out: &mut Vec<u64>) {
        if parts_left == 0 {
            out.push(acc);
            return;
        }
        let top = iroot(budget, p).min(max_part);
        for a in 0..=top {
            let ap = a.pow(p);
            rec(parts_left - 1, p, budget - ap, a, acc + ap, out);
        }
    }
    let mut out = Vec::new();
    rec(n, p, limit, u64::MAX, 0, &mut out);
    out.sort_unstable();
    out.dedup();
    out
}

/// All `z ∈ Z^n` with `Σ|z_i|^p <= s`, in lexicographic order.
pub fn ball_points(n: usize, p: u32, s: PowRadius) -> Vec<Vec<i64>> {
    check_np(n, p);
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    collect_ball(n, p, s.0, &mut prefix, &mut |pt| out.push(pt.to_vec()));
    out
}

fn collect_ball(n: usize, p: u32, budget: u64, prefix: &mut Vec<i64>, sink: &mut impl FnMut(&[i64])) {
    if prefix.len() == n {
        sink(prefix);
        return;
    }
    let rho = iroot(budget, p) as i64;
    for a in -rho..=rho {
        prefix.push(a);
        collect_ball(n, p, budget - a.unsigned_abs().pow(p), prefix, sink);
        prefix.pop();
    }
}

/// `μ(n, p, s)`: the number of integer points in the ball, counted without
/// materializing them.
pub fn mu(n: usize, p: u32, s: PowRadius) -> u64 {
    check_np(n, p);
    count_ball(n, p, s.0)
}

fn count_ball(n: usize, p: u32, budget: u64) -> u64 {
    let rho = iroot(budget, p);
    if n == 1 {
        return 2 * rho + 1;
    }
    let mut total = count_ball(n - 1, p, budget);
    for a in 1..=rho {
        total += 2 * count_ball(n - 1, p, budget - a.pow(p));
    }
    total
}

/// Ball points sorted by `Σ|z_i|^p` (ties in lexicographic order), stored flat.
#[derive(Clone, Debug)]
pub struct NormOrderedBall {
    n: usize,
    p: u32,
    radius: PowRadius,
    coords: Vec<i64>,
    norms: Vec<u64>,
}

impl NormOrderedBall {
    pub fn new(n: usize, p: u32, s: PowRadius) -> Self {
        check_np(n, p);
        let mut pts: Vec<(u64, Vec<i64>)> = Vec::new();
        let mut prefix = Vec::with_capacity(n);
        collect_ball(n, p, s.0, &mut prefix, &mut |pt| {
            pts.push((pow_norm(pt, p).expect("ball point norm fits"), pt.to_vec()))
        });
        // stable: lexicographic order survives within each shell
        pts.sort_by_key(|(norm, _)| *norm);
        let mut coords = Vec::with_capacity(pts.len() * n);
        let mut norms = Vec::with_capacity(pts.len());
        for (norm, pt) in pts {
            norms.push(norm);
            coords.extend_from_slice(&pt);
        }
        NormOrderedBall { n, p, radius: s, coords, norms }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn exponent(&self) -> u32 {
        self.p
    }

    pub fn radius(&self) -> PowRadius {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.norms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.norms.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.n..(i + 1) * self.n]
    }

    pub fn norm(&self, i: usize) -> u64 {
        self.norms[i]
    }

    pub fn norms(&self) -> &[u64] {
        &self.norms
    }

    /// Number of points with norm `<= s`, i.e. `μ(n, p, s)` for `s <= radius`.
    pub fn count_within(&self, s: PowRadius) -> usize {
        self.norms.partition_point(|&x| x <= s.0)
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.n)
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BallCase {
    CaseI,
    CaseII,
    CaseIII,
    CaseIV,
    Unclassified,
}

/// Shape class of `B_p^n(r)` with the closed-form point count it implies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallShape {
    pub case: BallCase,
    pub predicted_mu: Option<BigInt>,
    /// Set when case (ii)'s side condition written with a bare `(r-2)`
    /// decides differently from the `(r-2)^p` form used here.
    pub case_ii_predicates_disagree: bool,
}

impl BallShape {
    fn unclassified(disagree: bool) -> Self {
        BallShape { case: BallCase::Unclassified, predicted_mu: None, case_ii_predicates_disagree: disagree }
    }
}

fn rat_pow(x: &BigRational, p: u32) -> BigRational {
    num_traits::pow(x.clone(), p as usize)
}

fn int_pow(x: &BigInt, p: u32) -> BigRational {
    BigRational::from_integer(num_traits::pow(x.abs(), p as usize))
}

/// Classifies the ball of exact radius `r` by the four polyomino shapes and
/// predicts `μ` for the matching one. All threshold conditions are evaluated
/// as exact power inequalities on `r^p`.
pub fn classify_ball(n: usize, p: u32, r: &BigRational) -> BallShape {
    check_np(n, p);
    if !r.is_positive() {
        return BallShape::unclassified(false);
    }
    let rp = rat_pow(r, p);
    let nn = BigInt::from(n);
    let n_rat = BigRational::from_integer(nn.clone());
    let n1_rat = BigRational::from_integer(&nn - 1);
    let two_n = BigInt::from(2u32).pow(n as u32);
    let one = BigInt::from(1);
    let two = BigInt::from(2);

    if r.is_integer() {
        let ri = r.to_integer();
        let box_count = num_traits::pow(&two * &ri - &one, n);
        if &n_rat * int_pow(&(&ri - &one), p) <= rp {
            return BallShape {
                case: BallCase::CaseI,
                predicted_mu: Some(box_count + &two * &nn),
                case_ii_predicates_disagree: false,
            };
        }
        let base = &n1_rat * int_pow(&(&ri - &one), p);
        let powered = &base + int_pow(&(&ri - &two), p) <= rp;
        let verbatim = &base + BigRational::from_integer(&ri - &two) <= rp;
        if powered {
            return BallShape {
                case: BallCase::CaseII,
                predicted_mu: Some(box_count + &two * &nn - two_n),
                case_ii_predicates_disagree: powered != verbatim,
            };
        }
        return BallShape::unclassified(powered != verbatim);
    }

    let f = r.floor().to_integer();
    let box_count = num_traits::pow(&two * &f + &one, n);
    let corner = &n_rat * int_pow(&f, p);
    let near_corner = &n1_rat * int_pow(&f, p) + int_pow(&(&f - &one), p);
    if corner > rp && near_corner <= rp {
        return BallShape {
            case: BallCase::CaseIII,
            predicted_mu: Some(box_count - two_n),
            case_ii_predicates_disagree: false,
        };
    }
    let next = &n1_rat * int_pow(&f, p) + int_pow(&(&f - &two), p);
    if near_corner > rp && next <= rp {
        return BallShape {
            case: BallCase::CaseIV,
            predicted_mu: Some(box_count - (&nn + &one) * two_n),
            case_ii_predicates_disagree: false,
        };
    }
    BallShape::unclassified(false)
}

/// `floor(r^p)` for a nonnegative rational radius, i.e. the largest integer
/// `s` whose ball equals `B_p^n(r)`.
pub fn floor_pow(r: &BigRational, p: u32) -> Result<PowRadius> {
    if r.is_negative() {
        return Err(Error::invalid("radius must be nonnegative"));
    }
    let v = rat_pow(r, p).floor().to_integer();
    let (_, digits) = v.to_u64_digits();
    match digits.len() {
        0 => Ok(PowRadius(0)),
        1 => Ok(PowRadius(digits[0])),
        _ => Err(Error::Overflow("radius power")),
    }
}

/// Parses a rational radius: `5`, `11/2` or `5.2`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    let bad = || Error::invalid(format!("not a rational number: {text:?}"));
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let neg = int.starts_with('-');
        let int: BigInt = if int.is_empty() || int == "-" { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let mag = int.abs() * &den + frac;
        return Ok(BigRational::new(if neg { -mag } else { mag }, den));
    }
    let int: BigInt = t.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(int))
}

/// Euclidean volume of the unit ℓ_p ball in R^n: `(2Γ(1/p+1))^n / Γ(n/p+1)`.
pub fn unit_ball_volume(n: usize, p: u32) -> f64 {
    use statrs::function::gamma::gamma;
    check_np(n, p);
    let pf = f64::from(p);
    (2.0 * gamma(1.0 / pf + 1.0)).powi(n as i32) / gamma(n as f64 / pf + 1.0)
}

/// Floor of a rational as a plain integer, when it fits.
pub(crate) fn rational_floor_i64(r: &BigRational) -> Option<i64> {
    let f = r.floor().to_integer();
    let (q, _) = f.div_rem(&BigInt::from(1));
    i64::try_from(q).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_representable(n: usize, p: u32, s: u64) -> bool {
        fn rec(n: usize, p: u32, s: u64) -> bool {
            if n == 0 {
                return s == 0;
            }
            (0..=s).take_while(|a| a.pow(p) <= s).any(|a| rec(n - 1, p, s - a.pow(p)))
        }
        rec(n, p, s)
    }

    fn brute_mu(n: usize, p: u32, s: u64) -> u64 {
        let r = iroot(s, p) as i64;
        let mut count = 0;
        let mut idx = vec![-r; n];
        loop {
            if pow_norm(&idx, p).unwrap() <= s {
                count += 1;
            }
            let mut k = 0;
            loop {
                if k == n {
                    return count;
                }
                if idx[k] < r {
                    idx[k] += 1;
                    break;
                }
                idx[k] = -r;
                k += 1;
            }
        }
    }

    #[test]
    fn iroot_exact_at_powers() {
        for p in 1..=10 {
            for a in 0u64..60 {
                let Some(ap) = a.checked_pow(p) else { continue };
                assert_eq!(iroot(ap, p), a);
                if ap > 0 {
                    assert_eq!(iroot(ap - 1, p), a - 1);
                }
            }
        }
        assert_eq!(iroot(u64::MAX, 2), 4294967295);
    }

    #[test]
    fn representable_examples() {
        assert!(is_representable(2, 2, PowRadius(37)));
        assert!(!is_representable(2, 2, PowRadius(3)));
        for n in 1..4 {
            for p in 1..5 {
                assert!(is_representable(n, p, PowRadius(0)));
            }
        }
    }

    #[test]
    fn representable_matches_brute_force() {
        for n in 1..=3 {
            for p in 1..=4 {
                for s in 0..300 {
                    assert_eq!(
                        is_representable(n, p, PowRadius(s)),
                        brute_representable(n, p, s),
                        "n={n} p={p} s={s}"
                    );
                }
            }
        }
    }

    #[test]
    fn distance_set_examples() {
        let d = DistanceSet::new(2, 2, PowRadius(50));
        let got: Vec<u64> = d.elements().iter().map(|s| s.0).collect();
        assert_eq!(
            got,
            [0, 1, 2, 4, 5, 8, 9, 10, 13, 16, 17, 18, 20, 25, 26, 29, 32, 34, 36, 37, 40, 41, 45, 49, 50]
        );
        let d = DistanceSet::new(1, 3, PowRadius(8));
        assert_eq!(d.elements(), &[PowRadius(0), PowRadius(1), PowRadius(8)]);
        let d = DistanceSet::new(3, 2, PowRadius(6));
        assert_eq!(d.len(), 7);
    }

    #[test]
    fn sieve_and_enumeration_agree() {
        for n in 1..=3 {
            for p in 1..=5 {
                let limit = PowRadius(700);
                assert_eq!(
                    DistanceSet::by_sieve(n, p, limit),
                    DistanceSet::by_enumeration(n, p, limit),
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn successor_and_gaps() {
        let d = DistanceSet::new(2, 2, PowRadius(200));
        assert_eq!(d.successor(PowRadius(74)).unwrap(), PowRadius(80));
        assert_eq!(d.successor(PowRadius(0)).unwrap(), PowRadius(1));
        assert_eq!(d.successor(PowRadius(5)).unwrap(), PowRadius(8));
        assert_eq!(d.gap_count(PowRadius(5), PowRadius(8)).unwrap(), 1);
        assert_eq!(d.gap_count(PowRadius(0), PowRadius(144)).unwrap(), 58);
        // 37, 40, 41, 45, 49 lie in [37, 50)
        assert_eq!(d.gap_count(PowRadius(37), PowRadius(50)).unwrap(), 5);
        assert_eq!(d.gap_count(PowRadius(9), PowRadius(9)).unwrap(), 0);
        assert!(matches!(
            d.gap_count(PowRadius(0), PowRadius(201)),
            Err(Error::LimitExceeded { .. })
        ));
        let small = DistanceSet::new(2, 2, PowRadius(50));
        assert!(matches!(small.successor(PowRadius(50)), Err(Error::LimitExceeded { .. })));
        assert_eq!(small.predecessor(PowRadius(50)), Some(PowRadius(49)));
        assert_eq!(small.predecessor(PowRadius(0)), None);
        assert_eq!(small.floor(PowRadius(48)).unwrap(), PowRadius(45));
    }

    #[test]
    fn ball_point_examples() {
        assert_eq!(ball_points(2, 2, PowRadius(0)), vec![vec![0, 0]]);
        assert_eq!(ball_points(2, 2, PowRadius(5)).len(), 21);
        let pts = ball_points(2, 4, PowRadius(1296));
        assert_eq!(pts.len(), 125);
        for pt in &pts {
            let inner = pt.iter().all(|c| c.abs() <= 5);
            let axis = matches!(pt.as_slice(), [6, 0] | [-6, 0] | [0, 6] | [0, -6]);
            assert!(inner || axis, "{pt:?}");
        }
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(sorted, pts);
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu(2, 2, PowRadius(41)), 137);
        assert_eq!(mu(2, 2, PowRadius(74)), 241);
        assert_eq!(mu(2, 2, PowRadius(9)), 29);
        for n in 1..=3 {
            for p in 1..=4 {
                for s in (0..120).step_by(7) {
                    assert_eq!(mu(n, p, PowRadius(s)), brute_mu(n, p, s));
                }
            }
        }
    }

    #[test]
    fn norm_ordered_ball_prefixes() {
        let ball = NormOrderedBall::new(2, 2, PowRadius(50));
        assert!(ball.norms().windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(ball.point(0), &[0, 0]);
        for s in 0..=50 {
            assert_eq!(ball.count_within(PowRadius(s)) as u64, mu(2, 2, PowRadius(s)));
        }
    }

    #[test]
    fn classify_examples() {
        let r = |t: &str| parse_rational(t).unwrap();
        let shape = classify_ball(2, 4, &r("6"));
        assert_eq!(shape.case, BallCase::CaseI);
        assert_eq!(shape.predicted_mu, Some(BigInt::from(125)));

        let shape = classify_ball(2, 3, &r("6"));
        assert_eq!(shape.case, BallCase::CaseII);
        assert_eq!(shape.predicted_mu, Some(BigInt::from(121)));

        // the disc of radius 5.5 has 97 points and none of the four shapes
        let shape = classify_ball(2, 2, &r("11/2"));
        assert_eq!(shape.case, BallCase::Unclassified);
        assert_eq!(mu(2, 2, floor_pow(&r("11/2"), 2).unwrap()), 97);

        let shape = classify_ball(2, 3, &r("11/2"));
        assert_eq!(shape.case, BallCase::CaseIV);
        assert_eq!(shape.predicted_mu, Some(BigInt::from(109)));

        let shape = classify_ball(2, 4, &r("5.5"));
        assert_eq!(shape.case, BallCase::CaseIII);
        assert_eq!(shape.predicted_mu, Some(BigInt::from(117)));
    }

    #[test]
    fn bare_case_ii_condition_is_flagged() {
        // (n-1)(r-1)^p + (r-2) = 25 + 4 <= 36 but 25 + 16 > 36
        let shape = classify_ball(2, 2, &BigRational::from_integer(BigInt::from(6)));
        assert_eq!(shape.case, BallCase::Unclassified);
        assert!(shape.case_ii_predicates_disagree);
        assert_eq!(mu(2, 2, PowRadius(36)), 113);
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((unit_ball_volume(2, 2) - std::f64::consts::PI).abs() < 1e-12);
        assert!((unit_ball_volume(2, 1) - 2.0).abs() < 1e-12);
        assert!((unit_ball_volume(3, 2) - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn rational_parsing() {
        let half = BigRational::new(BigInt::from(11), BigInt::from(2));
        assert_eq!(parse_rational("11/2").unwrap(), half);
        assert_eq!(parse_rational("5.5").unwrap(), half);
        assert_eq!(parse_rational(" 26/5 ").unwrap(), parse_rational("5.2").unwrap());
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(rational_floor_i64(&half), Some(5));
    }
}
