use super::arc::{param_of, period, OrientedArc};
use super::disk::in_all;
use super::{Circline, ExtPoint, GeneralizedDisk};

/// Parameter gap below which two breakpoints are merged.
const BREAK_TOL: f64 = 1e-10;

/// Splits a circline at `breaks` and keeps the sub-arcs accepted by `keep`, merging
/// adjacent kept pieces. `orient` orients every returned arc.
pub fn split_circline<F>(carrier: &Circline, orient: f64, breaks: &[ExtPoint], keep: F) -> Vec<OrientedArc>
where
    F: Fn(&OrientedArc) -> bool,
{
    let p = period(carrier);
    let mut ts: Vec<f64> = breaks.iter().map(|&z| param_of(carrier, z)).collect();
    ts.sort_by(|a, b| a.total_cmp(b));
    let mut uniq: Vec<f64> = Vec::new();
    for t in ts {
        if uniq.last().is_none_or(|&last| t - last > BREAK_TOL) {
            uniq.push(t);
        }
    }
    if uniq.len() > 1 && uniq[0] + p - uniq[uniq.len() - 1] <= BREAK_TOL {
        uniq.pop();
    }
    if uniq.is_empty() {
        let full = OrientedArc::full(*carrier, orient);
        return if keep(&full) { vec![full] } else { Vec::new() };
    }
    let m = uniq.len();
    let segments: Vec<(f64, f64)> =
        (0..m).map(|i| (uniq[i], if i + 1 < m { uniq[i + 1] } else { uniq[0] + p })).collect();
    let kept: Vec<bool> = segments.iter().map(|&(a, b)| keep(&OrientedArc::new(*carrier, a, b, orient))).collect();
    if kept.iter().all(|&k| k) {
        return vec![OrientedArc::new(*carrier, uniq[0], uniq[0] + p, orient)];
    }
    // Rotate so that the walk starts right after a dropped segment, then merge runs.
    let first_drop = kept.iter().position(|&k| !k).expect("some segment dropped");
    let mut out = Vec::new();
    let mut run: Option<(f64, f64)> = None;
    for step in 1..=m {
        let i = (first_drop + step) % m;
        let (mut a, mut b) = segments[i];
        if i <= first_drop {
            a += p;
            b += p;
        }
        if kept[i] {
            run = Some(match run {
                Some((s, _)) => (s, b),
                None => (a, b),
            });
        } else if let Some((s, e)) = run.take() {
            out.push(OrientedArc::new(*carrier, s, e, orient));
        }
    }
    if let Some((s, e)) = run {
        out.push(OrientedArc::new(*carrier, s, e, orient));
    }
    out
}

/// Majority vote of three interior samples.
pub fn sample_vote<F: Fn(ExtPoint) -> bool>(arc: &OrientedArc, test: F) -> bool {
    [0.25, 0.5, 0.75].iter().filter(|&&u| test(arc.eval(u))).count() >= 2
}

/// Pieces `∂D_j ∩ X` of the boundary of `X = ∩ D_j`, oriented with the outward-normal
/// convention of `D_j`.
pub fn boundary_pieces(disks: &[GeneralizedDisk]) -> Vec<(usize, OrientedArc)> {
    let mut out = Vec::new();
    for (j, dj) in disks.iter().enumerate() {
        let full = OrientedArc::boundary(dj);
        let carrier = *full.carrier();
        let mut breaks = Vec::new();
        for (k, dk) in disks.iter().enumerate() {
            if k != j {
                if let Ok(pts) = carrier.intersect(&dk.boundary()) {
                    breaks.extend(pts);
                }
            }
        }
        let others: Vec<GeneralizedDisk> =
            disks.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, d)| *d).collect();
        let arcs = split_circline(&carrier, full.orientation(), &breaks, |arc| {
            sample_vote(arc, |z| in_all(&others, z, 1e-9))
        });
        out.extend(arcs.into_iter().map(|a| (j, a)));
    }
    out
}
