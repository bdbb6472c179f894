//! Explicit planar lattice families with known imperfection degree, and the
//! density bounds that cap an exhaustive search.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_ball::{mu, rational_floor_i64, unit_ball_volume, DistanceSet, PowRadius};
use crate::lattice::LatticeBasis;

/// Best known lattice covering density in the Euclidean plane.
pub const THETA_MIN_2D_EUCLIDEAN: f64 = 1.2092;
/// Best known lattice packing density in the Euclidean plane, π/√12.
pub const DELTA_SUP_2D_EUCLIDEAN: f64 = 0.9069;
/// Best known lattice covering density in Euclidean 3-space (body-centred cubic).
pub const THETA_MIN_3D_EUCLIDEAN: f64 = 1.4635;

/// Default covering density constant for `(n, p)`, when one is known.
pub fn default_theta_min(n: usize, p: u32) -> Option<f64> {
    match (n, p) {
        (2, 2) => Some(THETA_MIN_2D_EUCLIDEAN),
        (3, 2) => Some(THETA_MIN_3D_EUCLIDEAN),
        _ => None,
    }
}

pub fn default_delta_sup(n: usize, p: u32) -> Option<f64> {
    match (n, p) {
        (2, 2) => Some(DELTA_SUP_2D_EUCLIDEAN),
        _ => None,
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FamilyKind {
    A,
    B,
    C,
    D,
}

impl FamilyKind {
    pub const ALL: [FamilyKind; 4] = [FamilyKind::A, FamilyKind::B, FamilyKind::C, FamilyKind::D];
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::A => "A",
            FamilyKind::B => "B",
            FamilyKind::C => "C",
            FamilyKind::D => "D",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(FamilyKind::A),
            "B" => Ok(FamilyKind::B),
            "C" => Ok(FamilyKind::C),
            "D" => Ok(FamilyKind::D),
            other => Err(Error::invalid(format!("unknown family {other:?}, expected A, B, C or D"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilySpec {
    pub family: FamilyKind,
    #[serde(serialize_with = "ser_ratio")]
    pub r: BigRational,
    pub p: u32,
    pub basis: LatticeBasis,
    pub predicted_t: u64,
    /// Predicted `μ(2, p, r)`; the density numerator.
    pub predicted_mu: u64,
    #[serde(serialize_with = "ser_ratio_u64")]
    pub predicted_disc_density: Ratio<u64>,
}

fn ser_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn ser_ratio_u64<S: serde::Serializer>(r: &Ratio<u64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn pow(x: i64, p: u32) -> Result<BigInt> {
    Ok(BigInt::from(x).pow(p))
}

fn check(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::HypothesisViolated(what.to_string()))
    }
}

pub fn family(kind: FamilyKind, r: &BigRational, p: u32) -> Result<FamilySpec> {
    if p == 0 {
        return Err(Error::invalid("exponent p must be at least 1"));
    }
    if *r <= BigRational::one() {
        return Err(Error::HypothesisViolated("r > 1".into()));
    }
    let f = rational_floor_i64(r).ok_or(Error::Overflow("family radius"))?;
    let integral = r.is_integer();
    let rp = r.pow(p as i32);
    let int = |x: BigInt| BigRational::from_integer(x);
    let (rows, t, mu_pred, det): (Vec<Vec<i64>>, u64, i64, i64) = match kind {
        FamilyKind::A | FamilyKind::B => {
            check(integral, "r is an integer")?;
            let r = f;
            let twice = pow(r - 1, p)? * 2;
            let rp = pow(r, p)?;
            if kind == FamilyKind::A {
                check(twice <= rp, "2(r-1)^p <= r^p")?;
                let t = if r <= 3 { 1 } else { (r - 2) as u64 };
                let rows = vec![vec![r, 2 * r - 1], vec![2 * r, -1]];
                (rows, t, (2 * r - 1).pow(2) + 4, 4 * r * r - r)
            } else {
                check(r >= 3, "r >= 3")?;
                check(twice > rp, "2(r-1)^p > r^p")?;
                check(pow(r - 1, p)? + pow(r - 2, p)? <= rp, "(r-1)^p + (r-2)^p <= r^p")?;
                let rows = vec![vec![r - 1, 2 * r - 1], vec![2 * r, -1]];
                (rows, (r - 1) as u64, (2 * r - 1).pow(2), 4 * r * r - r - 1)
            }
        }
        FamilyKind::C | FamilyKind::D => {
            check(!integral, "r is not an integer")?;
            check(
                pow(f, p)? * 2 <= pow(f + 1, p)?,
                "2 floor(r)^p <= floor(r+1)^p",
            )?;
            let fp = pow(f, p)?;
            if kind == FamilyKind::C {
                check(int(fp.clone() * 2) > rp, "2 floor(r)^p > r^p")?;
                check(
                    int(fp + pow(f - 1, p)?) <= rp,
                    "floor(r)^p + floor(r-1)^p <= r^p",
                )?;
                let rows = vec![vec![2 * f + 1, -1], vec![2 * f - 1, 2 * f]];
                (rows, 1, (2 * f + 1).pow(2) - 4, 4 * f * f + 4 * f - 1)
            } else {
                check(f >= 2, "floor(r) >= 2")?;
                check(
                    int(fp.clone() + pow(f - 1, p)?) > rp,
                    "floor(r)^p + floor(r-1)^p > r^p",
                )?;
                check(
                    int(fp + pow(f - 2, p)?) <= rp,
                    "floor(r)^p + floor(r-2)^p <= r^p",
                )?;
                let rows = vec![vec![2 * f + 1, -2], vec![2 * f - 2, 2 * f - 1]];
                (rows, 2, (2 * f + 1).pow(2) - 12, 4 * f * f + 4 * f - 5)
            }
        }
    };
    let basis = LatticeBasis::new(rows)?;
    debug_assert_eq!(basis.det() as i64, det);
    Ok(FamilySpec {
        family: kind,
        r: r.clone(),
        p,
        basis,
        predicted_t: t,
        predicted_mu: mu_pred as u64,
        predicted_disc_density: Ratio::new(mu_pred as u64, det as u64),
    })
}

/// Least `p` with `2(r-1)^p <= r^p`, i.e. `p >= ln 2 / ln(r/(r-1))`.
pub fn min_p_threshold_a(r: u64) -> u32 {
    assert!(r >= 2, "r must be at least 2");
    let (r, q) = (BigInt::from(r), BigInt::from(r - 1));
    let mut p = 1u32;
    while q.pow(p) * 2 > r.pow(p) {
        p += 1;
    }
    p
}

/// All `p` with `2(r-1)^p > r^p` and `(r-1)^p + (r-2)^p <= r^p`.
pub fn p_range_b(r: u64) -> Vec<u32> {
    assert!(r >= 3, "r must be at least 3");
    let (a, b, c) = (BigInt::from(r), BigInt::from(r - 1), BigInt::from(r - 2));
    (1..)
        .take_while(|&p| b.pow(p) * 2 > a.pow(p))
        .filter(|&p| b.pow(p) + c.pow(p) <= a.pow(p))
        .collect()
}

/// Upper bound on the packing radius of a perfect code given the best
/// packing density `delta_sup`, with the largest admissible `r^p`.
pub fn perfect_radius_bound(n: usize, p: u32, delta_sup: f64) -> Result<(f64, PowRadius)> {
    if !(delta_sup > 0.0 && delta_sup < 1.0) {
        return Err(Error::invalid("delta_sup must lie in (0, 1)"));
    }
    let root = delta_sup.powf(1.0 / n as f64);
    let bound = (n as f64).powf(1.0 / p as f64) / 2.0 * (1.0 + root) / (1.0 - root);
    let cap = bound.powi(p as i32).floor();
    if cap.is_nan() || cap >= u64::MAX as f64 / 2.0 {
        return Err(Error::Overflow("perfect radius bound"));
    }
    let limit = PowRadius(cap as u64);
    let r = DistanceSet::new(n, p, limit).floor(limit)?;
    Ok((bound, r))
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub r_pow: PowRadius,
    pub mu: u64,
    pub delta_lower: f64,
    pub theta_upper_7: f64,
    pub theta_upper_8: f64,
}

fn bound_row(n: usize, p: u32, r_pow: PowRadius, cover_pow: PowRadius) -> BoundRow {
    let nroot = (n as f64).powf(1.0 / p as f64);
    let r = r_pow.radius(p);
    let big_r = cover_pow.radius(p);
    let m = mu(n, p, r_pow);
    let v = unit_ball_volume(n, p);
    let x = 2.0 * r / nroot;
    BoundRow {
        r_pow,
        mu: m,
        delta_lower: ((x - 1.0) / (x + 1.0)).powi(n as i32),
        theta_upper_7: v * (big_r + nroot / 2.0).powi(n as i32) / m as f64,
        theta_upper_8: v * (r + nroot).powi(n as i32) / m as f64,
    }
}

/// Density bounds for a quasi-perfect code with packing radius `r_pow`,
/// whose covering radius is the next element of the distance set.
pub fn quasiperfect_bound_row(n: usize, p: u32, r_pow: PowRadius) -> Result<BoundRow> {
    let cover = DistanceSet::new(n, p, next_limit(r_pow)).successor(r_pow)?;
    Ok(bound_row(n, p, r_pow, cover))
}

/// Same bounds for a perfect code, where the covering radius equals `r_pow`.
pub fn perfect_bound_row(n: usize, p: u32, r_pow: PowRadius) -> BoundRow {
    bound_row(n, p, r_pow, r_pow)
}

// Every n >= 2 has (x+1)^p in D, so the successor of r^p lies below (floor(r)+1)^p + 1.
fn next_limit(r_pow: PowRadius) -> PowRadius {
    PowRadius(r_pow.get().saturating_mul(4).saturating_add(16))
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Perfect,
    Quasiperfect,
}

impl FromStr for BoundMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "perfect" => Ok(BoundMode::Perfect),
            "quasiperfect" | "quasi-perfect" | "quasi" => Ok(BoundMode::Quasiperfect),
            _ => Err(Error::invalid(format!("unknown mode {s:?}, expected perfect or quasiperfect"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub p: u32,
    pub mode: BoundMode,
    pub theta_min: f64,
    /// Rows for every element of the distance set up to the end of the scan.
    pub rows: Vec<BoundRow>,
    /// Largest packing radius whose covering-side bound still reaches `theta_min`.
    pub r_pow_max: PowRadius,
    pub volume_max: u64,
}

impl BoundReport {
    /// Rows whose covering-side bound reaches `theta_min`.
    pub fn feasible_rows(&self) -> impl Iterator<Item = &BoundRow> {
        self.rows.iter().filter(move |r| r.theta_upper_7 >= self.theta_min)
    }
}

/// Scan the distance set until the covering-side bound fails everywhere on `[s, 4s]` past
/// the last feasible radius.
pub fn bound_report(n: usize, p: u32, theta_min: f64, mode: BoundMode) -> Result<BoundReport> {
    if n < 2 {
        return Err(Error::DimensionUnsupported { dim: n, supported: "n >= 2" });
    }
    if p == 0 {
        return Err(Error::invalid("exponent p must be at least 1"));
    }
    if theta_min.is_nan() || theta_min <= 1.0 {
        return Err(Error::invalid("theta_min must exceed 1"));
    }
    let mut limit = 64u64;
    loop {
        let d = DistanceSet::new(n, p, PowRadius(limit));
        let elems = d.elements();
        let mut rows = Vec::new();
        let mut last_ok: Option<(usize, PowRadius)> = None;
        for (i, &s) in elems.iter().enumerate().skip(1) {
            let cover = match mode {
                BoundMode::Perfect => s,
                BoundMode::Quasiperfect => match elems.get(i + 1) {
                    Some(&c) => c,
                    None => break,
                },
            };
            let row = bound_row(n, p, s, cover);
            if row.theta_upper_7 >= theta_min {
                last_ok = Some((rows.len(), cover));
            }
            rows.push(row);
        }
        let s = last_ok.map_or(1, |(i, _)| rows[i].r_pow.get().max(1));
        let scanned = rows.last().map_or(0, |r| r.r_pow.get());
        if scanned >= s.saturating_mul(4) {
            let (r_pow_max, cover) = match last_ok {
                Some((i, c)) => (rows[i].r_pow, c),
                None => (PowRadius::ZERO, PowRadius::ZERO),
            };
            rows.truncate(rows.partition_point(|r| r.r_pow.get() <= s.saturating_mul(4)));
            let nroot = (n as f64).powf(1.0 / p as f64);
            let v = unit_ball_volume(n, p);
            let volume_max =
                (v * (cover.radius(p) + nroot / 2.0).powi(n as i32) / theta_min).floor() as u64;
            return Ok(BoundReport { n, p, mode, theta_min, rows, r_pow_max, volume_max });
        }
        limit = limit.checked_mul(4).ok_or(Error::Overflow("bound scan"))?;
    }
}

pub fn max_search_volume(n: usize, p: u32, theta_min: f64, mode: BoundMode) -> Result<u64> {
    Ok(bound_report(n, p, theta_min, mode)?.volume_max)
}

/// Parse a positive radius such as `3`, `26/5` or `5.2`.
pub fn parse_radius(s: &str) -> Result<BigRational> {
    let r = crate::exact_ball::parse_rational(s)?;
    if r <= BigRational::zero() {
        return Err(Error::invalid(format!("radius {s:?} must be positive")));
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::analyze;
    use crate::lattice::{canonical_congruence_form, hnf};

    fn q(s: &str) -> BigRational {
        parse_radius(s).unwrap()
    }

    fn ln_threshold(r: u64) -> f64 {
        2f64.ln() / (r as f64 / (r - 1) as f64).ln()
    }

    #[test]
    fn threshold_table() {
        let got: Vec<u32> = (2..=14).map(min_p_threshold_a).collect();
        assert_eq!(got, [1, 2, 3, 4, 4, 5, 6, 6, 7, 8, 8, 9, 10]);
        for r in 2..=40u64 {
            assert_eq!(min_p_threshold_a(r), ln_threshold(r).ceil() as u32, "r = {r}");
        }
    }

    #[test]
    fn range_table() {
        // The printed table also lists p = 2 at r = 3 and p = 4 at r = 6, where
        // 2(r-1)^p <= r^p and the family hypothesis fails.
        let want: [&[u32]; 12] = [
            &[1],
            &[2],
            &[2, 3],
            &[3],
            &[3, 4],
            &[4, 5],
            &[4, 5],
            &[5, 6],
            &[5, 6, 7],
            &[6, 7],
            &[6, 7, 8],
            &[7, 8, 9],
        ];
        for (r, w) in (3..=14).zip(want) {
            assert_eq!(p_range_b(r), w, "r = {r}");
            for &p in w {
                assert!((p as f64) < ln_threshold(r), "r = {r}, p = {p}");
            }
        }
    }

    #[test]
    fn boundary_columns_are_not_family_b() {
        for (r, p) in [(3u64, 2u32), (6, 4)] {
            assert_eq!(min_p_threshold_a(r), p);
            let rr = BigRational::from_integer(r.into());
            assert!(family(FamilyKind::B, &rr, p).is_err());
        }
    }

    #[test]
    fn family_a_examples() {
        let f = family(FamilyKind::A, &q("3"), 2).unwrap();
        assert_eq!(f.basis.rows(), &[vec![3, 5], vec![6, -1]]);
        assert_eq!(f.predicted_t, 1);
        assert_eq!(f.predicted_disc_density, Ratio::new(29, 33));
        let want = hnf(&LatticeBasis::new(vec![vec![1, 6], vec![0, 33]]).unwrap()).unwrap();
        assert_eq!(
            canonical_congruence_form(&f.basis).unwrap(),
            canonical_congruence_form(want.basis()).unwrap()
        );

        let f = family(FamilyKind::A, &q("4"), 3).unwrap();
        assert_eq!(f.basis.rows(), &[vec![4, 7], vec![8, -1]]);
        assert_eq!(f.predicted_t, 2);
        let a = analyze(&f.basis, 3).unwrap();
        assert_eq!(a.t, 2);
    }

    #[test]
    fn family_d_example() {
        let f = family(FamilyKind::D, &q("26/5"), 4).unwrap();
        assert_eq!(f.basis.rows(), &[vec![11, -2], vec![8, 9]]);
        assert_eq!(f.predicted_t, 2);
        let a = analyze(&f.basis, 4).unwrap();
        assert_eq!(a.t, 2);
        assert_eq!(a.disc_pack_ratio(), f.predicted_disc_density);
    }

    #[test]
    fn hypotheses_are_named() {
        let e = family(FamilyKind::A, &q("4"), 2).unwrap_err();
        assert_eq!(e, Error::HypothesisViolated("2(r-1)^p <= r^p".into()));
        let e = family(FamilyKind::B, &q("4"), 3).unwrap_err();
        assert_eq!(e, Error::HypothesisViolated("2(r-1)^p > r^p".into()));
        assert!(matches!(family(FamilyKind::C, &q("3"), 2), Err(Error::HypothesisViolated(_))));
        assert!(matches!(family(FamilyKind::A, &q("5/2"), 2), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn determinant_identities() {
        for r in 2..=12i64 {
            for p in 1..=12 {
                for kind in FamilyKind::ALL {
                    let rr = if matches!(kind, FamilyKind::A | FamilyKind::B) {
                        BigRational::from_integer(r.into())
                    } else {
                        BigRational::new((10 * r + 3).into(), 10.into())
                    };
                    if let Ok(f) = family(kind, &rr, p) {
                        let det = match kind {
                            FamilyKind::A => 4 * r * r - r,
                            FamilyKind::B => 4 * r * r - r - 1,
                            FamilyKind::C => 4 * r * r + 4 * r - 1,
                            FamilyKind::D => 4 * r * r + 4 * r - 5,
                        };
                        assert_eq!(f.basis.det() as i64, det);
                    }
                }
            }
        }
    }

    #[test]
    fn perfect_bound() {
        let (b, r) = perfect_radius_bound(2, 2, std::f64::consts::PI / 12f64.sqrt()).unwrap();
        assert!((b * b - 838.1).abs() < 0.5);
        assert_eq!(r, PowRadius(833));
        let (b, _) = perfect_radius_bound(2, 2, 1e-12).unwrap();
        assert!((b - 2f64.sqrt() / 2.0).abs() < 1e-3);
        assert!(perfect_radius_bound(2, 2, 1.0).is_err());
    }

    #[test]
    fn bound_rows() {
        let row = quasiperfect_bound_row(2, 2, PowRadius(74)).unwrap();
        assert_eq!(row.mu, 241);
        assert!((row.delta_lower - 0.7193).abs() < 1e-3);
        assert!((row.theta_upper_7 - 1.2143).abs() < 1e-3);
        assert!((row.theta_upper_8 - 1.3079).abs() < 1e-3);
        let row = perfect_bound_row(2, 2, PowRadius(49));
        assert!((row.theta_upper_7 - 1.2524).abs() < 1e-3);
    }

    #[test]
    fn search_volume_caps() {
        let v = max_search_volume(2, 2, THETA_MIN_2D_EUCLIDEAN, BoundMode::Quasiperfect).unwrap();
        assert!(v == 241 || v == 242, "{v}");
        let rep = bound_report(2, 2, THETA_MIN_2D_EUCLIDEAN, BoundMode::Quasiperfect).unwrap();
        assert_eq!(rep.r_pow_max, PowRadius(74));
        let rep = bound_report(2, 2, THETA_MIN_2D_EUCLIDEAN, BoundMode::Perfect).unwrap();
        assert_eq!(rep.r_pow_max, PowRadius(49));
        assert!(rep.rows.windows(2).all(|w| w[0].r_pow < w[1].r_pow));
        assert!(max_search_volume(2, 2, 10.0, BoundMode::Quasiperfect).unwrap() < 20);
    }
}
