//! Carathéodory-median tessellation of `X = ∩ D_j`.

mod export;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::arc::orientation_for;
use crate::geometry::pieces::sample_vote;
use crate::geometry::{
    boundary_pieces, classify_pair, in_all, median_form, split_circline, DiskForm, ExtPoint, GeneralizedDisk,
    OrientedArc, PairRelation,
};

pub use export::{export_json, export_svg, TessellationJson, Viewport};

/// Absolute tie tolerance on normalized distances.
pub const TIE_TOL: f64 = 1e-9;

/// Piece of `∂D_j ∩ X`, oriented with the outward normal of `D_j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryArc {
    pub j: usize,
    pub arc: OrientedArc,
}

/// Piece of `C_jk ∩ X_j ∩ X_k` with `j < k`, oriented as a replacement for
/// `∂D_j ∩ X` (the cell `X_j` lies to its right).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MedianArc {
    pub j: usize,
    pub k: usize,
    pub arc: OrientedArc,
}

/// Index lists describing the cell `X_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub j: usize,
    pub boundary_arcs: Vec<usize>,
    pub median_arcs: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tessellation {
    disks: Vec<GeneralizedDisk>,
    forms: Vec<DiskForm>,
    boundary_arcs: Vec<BoundaryArc>,
    median_arcs: Vec<MedianArc>,
    vertices: Vec<ExtPoint>,
    cells: Vec<Cell>,
}

/// `d(z, D_j) - d(z, D_m)`, projectively at infinity.
fn distance_gap(fj: &DiskForm, fm: &DiskForm, z: ExtPoint) -> f64 {
    match z {
        ExtPoint::Finite(z) => (fm.value(z) - fj.value(z)) / fj.scale_at(z).max(fm.scale_at(z)),
        ExtPoint::Infinity => fm.a - fj.a,
    }
}

impl Tessellation {
    pub fn build(disks: &[GeneralizedDisk]) -> Result<Self> {
        if disks.is_empty() {
            return Err(Error::DegenerateTessellation("no disks".into()));
        }
        for d in disks {
            d.validate()?;
        }
        let n = disks.len();
        for j in 0..n {
            for k in (j + 1)..n {
                match classify_pair(&disks[j], &disks[k])? {
                    PairRelation::Equal => {
                        return Err(Error::DegenerateTessellation(format!("disks {j} and {k} coincide")))
                    }
                    PairRelation::FirstInSecond | PairRelation::SecondInFirst => {
                        return Err(Error::NestedDisks(format!("disks {j} and {k}")))
                    }
                    PairRelation::Disjoint => {
                        return Err(Error::EmptyInterior(format!("disks {j} and {k} have disjoint interiors")))
                    }
                    _ => {}
                }
            }
        }
        let forms: Vec<DiskForm> = disks.iter().map(|d| d.form()).collect();
        let boundary_arcs: Vec<BoundaryArc> =
            boundary_pieces(disks).into_iter().map(|(j, arc)| BoundaryArc { j, arc }).collect();
        if boundary_arcs.is_empty() {
            return Err(Error::EmptyInterior("the disks have no common boundary piece".into()));
        }

        let mut medians = vec![vec![None; n]; n];
        for j in 0..n {
            for k in (j + 1)..n {
                medians[j][k] = Some(median_form(&disks[j], &disks[k])?);
            }
        }
        let median = |j: usize, k: usize| medians[j.min(k)][j.max(k)].expect("pair median");

        let mut median_arcs = Vec::new();
        for j in 0..n {
            for k in (j + 1)..n {
                let g = median(j, k);
                let carrier = g.circline();
                let orient = orientation_for(&carrier, &g);
                let mut breaks = Vec::new();
                for d in disks {
                    if let Ok(pts) = carrier.intersect(&d.boundary()) {
                        breaks.extend(pts);
                    }
                }
                for m in (0..n).filter(|&m| m != j && m != k) {
                    for other in [median(j, m), median(k, m)] {
                        if let Ok(pts) = carrier.intersect(&other.circline()) {
                            breaks.extend(pts);
                        }
                    }
                }
                let keep = |z: ExtPoint| {
                    in_all(disks, z, TIE_TOL)
                        && (0..n)
                            .filter(|&m| m != j && m != k)
                            .all(|m| distance_gap(&forms[j], &forms[m], z) <= TIE_TOL)
                };
                for arc in split_circline(&carrier, orient, &breaks, |arc| sample_vote(arc, keep)) {
                    median_arcs.push(MedianArc { j, k, arc });
                }
            }
        }

        let mut vertices: Vec<ExtPoint> = Vec::new();
        for m in &median_arcs {
            if m.arc.is_full() {
                continue;
            }
            for p in [m.arc.start(), m.arc.end()] {
                if !vertices.iter().any(|v| v.approx_eq(p, 1e-9)) {
                    vertices.push(p);
                }
            }
        }

        let cells = (0..n)
            .map(|j| Cell {
                j,
                boundary_arcs: boundary_arcs.iter().enumerate().filter(|(_, b)| b.j == j).map(|(i, _)| i).collect(),
                median_arcs: median_arcs
                    .iter()
                    .enumerate()
                    .filter(|(_, m)| m.j == j || m.k == j)
                    .map(|(i, _)| i)
                    .collect(),
            })
            .collect();

        Ok(Self { disks: disks.to_vec(), forms, boundary_arcs, median_arcs, vertices, cells })
    }

    pub fn disks(&self) -> &[GeneralizedDisk] {
        &self.disks
    }

    pub fn boundary_arcs(&self) -> &[BoundaryArc] {
        &self.boundary_arcs
    }

    pub fn median_arcs(&self) -> &[MedianArc] {
        &self.median_arcs
    }

    pub fn vertices(&self) -> &[ExtPoint] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Oriented median arcs replacing the boundary paths in the residual integral.
    pub fn integration_paths(&self) -> &[MedianArc] {
        &self.median_arcs
    }

    /// Indices `j` minimizing `d(z, D_j)`, with ties within [`TIE_TOL`].
    pub fn cell_of(&self, z: ExtPoint) -> Result<Vec<usize>> {
        if !in_all(&self.disks, z, TIE_TOL) {
            return Err(Error::PointOutsideDisk(format!("{z}")));
        }
        let dist = |j: usize| match z {
            ExtPoint::Finite(w) => -self.forms[j].value(w),
            ExtPoint::Infinity => -self.forms[j].a,
        };
        let ds: Vec<f64> = (0..self.disks.len()).map(dist).collect();
        let min = ds.iter().copied().fold(f64::INFINITY, f64::min);
        let scale = match z {
            ExtPoint::Finite(w) => self.forms.iter().map(|f| f.scale_at(w)).fold(1.0, f64::max),
            ExtPoint::Infinity => 1.0,
        };
        Ok((0..ds.len()).filter(|&j| ds[j] - min <= TIE_TOL * scale).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn annulus_median_is_geometric_mean_circle() {
        let t = Tessellation::build(&[GeneralizedDisk::disk(c(0.0, 0.0), 2.0), GeneralizedDisk::exterior(c(0.0, 0.0), 0.5)])
            .unwrap();
        assert_eq!(t.median_arcs().len(), 1);
        let m = t.median_arcs()[0];
        assert!(m.arc.is_full());
        for u in [0.1, 0.4, 0.8] {
            assert!((m.arc.eval(u).finite().unwrap().norm() - 1.0).abs() < 1e-12);
        }
        let (_, v) = m.arc.sample(0.0);
        assert!(v.im > 0.0);
        assert!(t.vertices().is_empty());
    }

    #[test]
    fn sector_median_is_bisector_ray() {
        let t = Tessellation::build(&[
            GeneralizedDisk::half_plane(0.0, c(0.0, 0.0)),
            GeneralizedDisk::half_plane(std::f64::consts::FRAC_PI_2, c(0.0, 0.0)),
        ])
        .unwrap();
        assert_eq!(t.median_arcs().len(), 1);
        let arc = t.median_arcs()[0].arc;
        let mid = arc.midpoint().finite().unwrap();
        assert!((mid.arg() - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        assert!(arc.contains(ExtPoint::Finite(c(0.0, 0.0)), 1e-9));
        assert!(arc.contains(ExtPoint::Infinity, 1e-9));
    }

    #[test]
    fn three_disks_have_proper_median_arcs() {
        let disks = [
            GeneralizedDisk::disk(c(0.0, 0.0), 2.0),
            GeneralizedDisk::exterior(c(0.3, 0.0), 0.5),
            GeneralizedDisk::half_plane(std::f64::consts::PI, c(1.5, 0.0)),
        ];
        let t = Tessellation::build(&disks).unwrap();
        assert!(t.median_arcs().iter().any(|m| !m.arc.is_full()));
        assert!(!t.vertices().is_empty());
        for m in t.median_arcs() {
            let z = m.arc.midpoint();
            let cells = t.cell_of(z).unwrap();
            assert!(cells.contains(&m.j) && cells.contains(&m.k), "{cells:?} for ({}, {})", m.j, m.k);
        }
    }

    #[test]
    fn rejects_duplicates_and_nesting() {
        let d = GeneralizedDisk::disk(c(0.0, 0.0), 1.0);
        assert!(matches!(Tessellation::build(&[d, d]), Err(Error::DegenerateTessellation(_))));
        let inner = GeneralizedDisk::disk(c(0.0, 0.0), 0.5);
        assert!(matches!(Tessellation::build(&[d, inner]), Err(Error::NestedDisks(_))));
    }

    #[test]
    fn json_round_trip_is_byte_identical() {
        let disks = [
            GeneralizedDisk::disk(c(0.0, 0.0), 2.0),
            GeneralizedDisk::exterior(c(0.3, 0.0), 0.5),
            GeneralizedDisk::half_plane(std::f64::consts::PI, c(1.5, 0.0)),
        ];
        let t = Tessellation::build(&disks).unwrap();
        let s = export_json(&t).unwrap();
        let back: TessellationJson = serde_json::from_str(&s).unwrap();
        assert_eq!(export_json(&back.rebuild().unwrap()).unwrap(), s);
    }

    #[test]
    fn svg_has_one_path_per_piece() {
        let t = Tessellation::build(&[GeneralizedDisk::disk(c(0.0, 0.0), 2.0), GeneralizedDisk::exterior(c(0.0, 0.0), 0.5)])
            .unwrap();
        let svg = export_svg(&t, None);
        assert_eq!(svg.matches("<path").count(), 3);
    }
}
