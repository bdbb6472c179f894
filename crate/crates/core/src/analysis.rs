//! Packing and covering radii, degree of imperfection and densities of a
//! lattice code.
//!
//! Both radii come from a single pass over the integer ball in order of
//! increasing norm, labelling every point by its coset of Λ:
//!
//! * the first repeated label sits on the first shell where translated balls
//!   meet, so the packing radius is the shell just below it;
//! * the point that completes the set of `det Λ` labels sits on the shell
//!   where translated balls first cover Z^n, which is the covering radius.

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact_ball::{mu, unit_ball_volume, DistanceSet, NormOrderedBall, PowRadius};
use crate::lattice::{hnf, shortest_in_hnf, HnfBasis, LatticeBasis};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodeAnalysis {
    pub basis: HnfBasis,
    pub dim: usize,
    pub p: u32,
    pub det: u64,
    /// Packing radius as `r^p`.
    #[serde(rename = "r_pow")]
    pub packing_pow: PowRadius,
    /// Covering radius as `R^p`.
    #[serde(rename = "R_pow")]
    pub covering_pow: PowRadius,
    #[serde(rename = "r")]
    pub packing_radius: f64,
    #[serde(rename = "R")]
    pub covering_radius: f64,
    pub t: u64,
    pub mu_r: u64,
    #[serde(rename = "mu_R")]
    pub mu_cover: u64,
    pub disc_pack_density: f64,
    pub disc_cover_density: f64,
    /// Shortest nonzero vector as `‖v‖_p^p`.
    pub shortest_pow: PowRadius,
    pub real_pack_radius: f64,
    pub real_pack_density: f64,
    pub real_cover_radius: Option<f64>,
    pub real_cover_density: Option<f64>,
}

impl CodeAnalysis {
    pub fn is_perfect(&self) -> bool {
        self.t == 0
    }

    pub fn is_quasi_perfect(&self) -> bool {
        self.t == 1
    }

    /// `μ(r_p) / det` as an exact fraction.
    pub fn disc_pack_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.mu_r, self.det)
    }

    /// `μ(R_p) / det` as an exact fraction.
    pub fn disc_cover_ratio(&self) -> Ratio<u64> {
        Ratio::new(self.mu_cover, self.det)
    }
}

/// Packing and covering radii from one norm-ordered pass.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Radii {
    pub packing: PowRadius,
    pub covering: PowRadius,
}

pub fn radii(h: &HnfBasis, p: u32) -> Radii {
    let n = h.dim();
    let det = h.det();
    let mut s = 1u64;
    while mu(n, p, PowRadius(s)) <= det.saturating_mul(2) {
        s *= 2;
    }
    loop {
        let ball = NormOrderedBall::new(n, p, PowRadius(s));
        if let Some(r) = sweep(h, &ball) {
            return r;
        }
        s = s.checked_mul(4).expect("covering radius within u64");
    }
}

/// Radii from a precomputed ball, or `None` when the ball is too small to decide.
pub(crate) fn sweep(h: &HnfBasis, ball: &NormOrderedBall) -> Option<Radii> {
    let det = h.det();
    let mut seen = vec![false; det as usize];
    let mut distinct = 0u64;
    let mut prev_shell = 0u64;
    let mut packing = None;
    let mut covering = None;
    for i in 0..ball.len() {
        let norm = ball.norm(i);
        let label = h.coset_index(ball.point(i)) as usize;
        if seen[label] {
            packing.get_or_insert(PowRadius(prev_shell));
        } else {
            seen[label] = true;
            distinct += 1;
            if distinct == det {
                covering = Some(PowRadius(norm));
            }
        }
        if let (Some(packing), Some(covering)) = (packing, covering) {
            return Some(Radii { packing, covering });
        }
        if i + 1 < ball.len() && ball.norm(i + 1) != norm {
            prev_shell = norm;
        }
    }
    None
}

/// Largest `s ∈ D_{p,n}` whose balls around lattice points are pairwise disjoint.
pub fn packing_radius_pow(h: &HnfBasis, p: u32) -> PowRadius {
    radii(h, p).packing
}

/// Smallest `s ∈ D_{p,n}` whose balls around lattice points cover Z^n.
pub fn covering_radius_pow(h: &HnfBasis, p: u32) -> PowRadius {
    radii(h, p).covering
}

/// `#(D_{p,n} ∩ [r_p, R_p))`: 0 for perfect codes, 1 for quasi-perfect ones.
pub fn imperfection_degree(h: &HnfBasis, p: u32) -> u64 {
    let r = radii(h, p);
    gap(h.dim(), p, r)
}

fn gap(n: usize, p: u32, r: Radii) -> u64 {
    DistanceSet::new(n, p, r.covering)
        .gap_count(r.packing, r.covering)
        .expect("covering radius is the limit") as u64
}

pub fn analyze(b: &LatticeBasis, p: u32) -> Result<CodeAnalysis> {
    if p == 0 {
        return Err(Error::invalid("exponent p must be at least 1"));
    }
    let h = hnf(b)?;
    let n = h.dim();
    let det = h.det();
    let r = radii(&h, p);
    let t = gap(n, p, r);
    let mu_r = mu(n, p, r.packing);
    let mu_cover = mu(n, p, r.covering);
    let volume = unit_ball_volume(n, p);
    let shortest = PowRadius(shortest_in_hnf(&h, p));
    let real_pack_radius = shortest.radius(p) / 2.0;
    let real_cover_radius = if n == 2 && p == 2 {
        Some(real_covering_radius_2d_euclidean(b)?)
    } else {
        None
    };
    let detf = det as f64;
    Ok(CodeAnalysis {
        dim: n,
        p,
        det,
        packing_pow: r.packing,
        covering_pow: r.covering,
        packing_radius: r.packing.radius(p),
        covering_radius: r.covering.radius(p),
        t,
        mu_r,
        mu_cover,
        disc_pack_density: mu_r as f64 / detf,
        disc_cover_density: mu_cover as f64 / detf,
        shortest_pow: shortest,
        real_pack_radius,
        real_pack_density: volume * real_pack_radius.powi(n as i32) / detf,
        real_cover_radius,
        real_cover_density: real_cover_radius.map(|rc| volume * rc.powi(n as i32) / detf),
        basis: h,
    })
}

/// Euclidean covering radius of a planar lattice: the circumradius of a
/// non-obtuse Delaunay triangle `{0, u, v}` of a Lagrange–Gauss reduced basis.
pub fn real_covering_radius_2d_euclidean(b: &LatticeBasis) -> Result<f64> {
    if b.dim() != 2 {
        return Err(Error::DimensionUnsupported { dim: b.dim(), supported: "2" });
    }
    let row = |i: usize| [b.rows()[i][0] as i128, b.rows()[i][1] as i128];
    let dot = |a: [i128; 2], c: [i128; 2]| a[0] * c[0] + a[1] * c[1];
    let (mut u, mut v) = (row(0), row(1));
    loop {
        if dot(u, u) > dot(v, v) {
            std::mem::swap(&mut u, &mut v);
        }
        let nu = dot(u, u);
        let m = (2 * dot(u, v) + nu).div_euclid(2 * nu);
        if m == 0 {
            break;
        }
        v = [v[0] - m * u[0], v[1] - m * u[1]];
    }
    if dot(u, v) < 0 {
        v = [-v[0], -v[1]];
    }
    let w = [u[0] - v[0], u[1] - v[1]];
    let len = |a: [i128; 2]| (dot(a, a) as f64).sqrt();
    let area2 = (u[0] * v[1] - u[1] * v[0]).abs() as f64;
    Ok(len(u) * len(v) * len(w) / (2.0 * area2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{closest_in_hnf, coset_representatives};

    fn basis(rows: &[&[i64]]) -> LatticeBasis {
        LatticeBasis::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    fn h(rows: &[&[i64]]) -> HnfBasis {
        hnf(&basis(rows)).unwrap()
    }

    #[test]
    fn example_lattice_radii() {
        let l = h(&[&[5, 11], &[13, 1]]);
        assert_eq!(packing_radius_pow(&l, 2), PowRadius(37));
        assert_eq!(covering_radius_pow(&l, 2), PowRadius(50));
    }

    #[test]
    fn integer_lattice_is_perfect() {
        for n in 1..=3 {
            let id = hnf(&LatticeBasis::identity(n).unwrap()).unwrap();
            for p in 1..=4 {
                assert_eq!(radii(&id, p), Radii { packing: PowRadius(0), covering: PowRadius(0) });
                assert_eq!(imperfection_degree(&id, p), 0);
            }
        }
    }

    #[test]
    fn table_rows() {
        assert_eq!(packing_radius_pow(&h(&[&[1, 5], &[0, 24]]), 2), PowRadius(5));
        assert_eq!(covering_radius_pow(&h(&[&[1, 0], &[0, 24]]), 2), PowRadius(144));
        assert_eq!(imperfection_degree(&h(&[&[1, 5], &[0, 24]]), 2), 1);
        assert_eq!(imperfection_degree(&h(&[&[1, 3], &[0, 24]]), 2), 7);
        assert_eq!(imperfection_degree(&h(&[&[3, 4], &[0, 8]]), 2), 2);
    }

    #[test]
    fn covering_matches_closest_point_route() {
        for rows in [&[&[1, 5][..], &[0, 24]][..], &[&[2, 3], &[0, 12]], &[&[5, 11], &[13, 1]]] {
            let l = h(rows);
            for p in 1..=4 {
                let cvp = coset_representatives(&l)
                    .iter()
                    .map(|x| closest_in_hnf(&l, p, x))
                    .max()
                    .unwrap();
                assert_eq!(covering_radius_pow(&l, p), PowRadius(cvp));
            }
        }
    }

    #[test]
    fn analyze_examples() {
        let a = analyze(&basis(&[&[1, 4], &[0, 24]]), 2).unwrap();
        assert_eq!((a.packing_pow, a.covering_pow), (PowRadius(4), PowRadius(10)));
        assert!((a.real_pack_radius - 2.0616).abs() < 5e-5);
        assert!((a.real_cover_radius.unwrap() - 3.3001).abs() < 5e-5);
        assert!((a.covering_radius - 3.1623).abs() < 5e-5);

        let a = analyze(&basis(&[&[1, 5], &[0, 24]]), 2).unwrap();
        assert_eq!(a.t, 1);
        assert_eq!(a.disc_pack_ratio(), Ratio::new(21, 24));
        assert!((a.disc_cover_density - 1.0417).abs() < 5e-5);
        assert!((a.real_pack_density - 0.8508).abs() < 5e-5);
        assert!((a.real_cover_density.unwrap() - 1.229).abs() < 5e-4);
        assert!((a.real_cover_radius.unwrap() - 3.0641).abs() < 5e-5);

        let a = analyze(&LatticeBasis::identity(2).unwrap(), 2).unwrap();
        assert_eq!((a.packing_pow, a.covering_pow, a.t), (PowRadius(0), PowRadius(0), 0));
        assert_eq!((a.disc_pack_density, a.disc_cover_density), (1.0, 1.0));
        assert!((a.real_cover_radius.unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn real_cover_rejects_other_dimensions() {
        let b = LatticeBasis::identity(3).unwrap();
        assert!(matches!(
            real_covering_radius_2d_euclidean(&b),
            Err(Error::DimensionUnsupported { dim: 3, .. })
        ));
        assert_eq!(analyze(&b, 2).unwrap().real_cover_radius, None);
    }

    #[test]
    fn json_carries_exact_and_display_radii() {
        let a = analyze(&basis(&[&[1, 5], &[0, 24]]), 2).unwrap();
        let v: serde_json::Value = serde_json::to_value(&a).unwrap();
        assert_eq!(v["r_pow"], 5);
        assert_eq!(v["R_pow"], 8);
        assert_eq!(v["basis"], serde_json::json!([[1, 5], [0, 24]]));
        assert!((v["R"].as_f64().unwrap() - 8f64.sqrt()).abs() < 1e-12);
        let back: CodeAnalysis = serde_json::from_value(v).unwrap();
        assert_eq!(back, a);
    }
}
