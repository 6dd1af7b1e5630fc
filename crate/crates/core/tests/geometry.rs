use num_complex::Complex64;
use proptest::prelude::*;
use specset::geometry::{
    classify_pair, median_circline, normalize_pair, DiskForm, ExtPoint, GeneralizedDisk, MoebiusMap, OrientedArc,
    PairCase, PairRelation,
};
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn point() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(x, y)| c(x, y))
}

fn disk() -> impl Strategy<Value = GeneralizedDisk> {
    prop_oneof![
        (point(), 0.3..3.0f64).prop_map(|(z, r)| GeneralizedDisk::disk(z, r)),
        (point(), 0.3..3.0f64).prop_map(|(z, r)| GeneralizedDisk::exterior(z, r)),
        (0.0..2.0 * PI, point()).prop_map(|(t, a)| GeneralizedDisk::half_plane(t, a)),
    ]
}

fn mobius() -> impl Strategy<Value = MoebiusMap> {
    (point(), point(), point(), point())
        .prop_filter_map("degenerate map", |(a, b, cc, d)| {
            if (a * d - b * cc).norm() < 0.2 {
                return None;
            }
            MoebiusMap::new(a, b, cc, d).ok()
        })
}

/// A point of `D` at least `margin` away from its boundary.
fn interior_point(d: &GeneralizedDisk, w: Complex64, margin: f64) -> Option<Complex64> {
    d.contains_interior(w, margin).then_some(w)
}

fn forms_close(f: &DiskForm, g: &DiskForm, tol: f64) -> bool {
    let scale = 1.0 + f.a.abs() + f.b.norm() + f.c.abs();
    (f.a - g.a).abs() + (f.b - g.b).norm() + (f.c - g.c).abs() <= tol * scale
}

proptest! {
    #[test]
    fn caratheodory_distance_is_moebius_equivariant(d in disk(), phi in mobius(), w in point()) {
        let Some(z) = interior_point(&d, w, 1e-3) else { return Ok(()) };
        let pole = phi.pole();
        prop_assume!(!d.contains_with_tol(pole, 1e-3));
        let Some(pz) = phi.apply_finite(z) else { return Ok(()) };
        prop_assume!(pz.norm() < 1e6);
        let image = d.image(&phi).unwrap();
        let lhs = image.caratheodory_distance(ExtPoint::Finite(pz)).unwrap();
        let rhs = phi.derivative(z).norm() * d.caratheodory_distance(ExtPoint::Finite(z)).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.max(1e-300) + 1e-14, "{lhs} vs {rhs}");
    }

    #[test]
    fn membership_is_preserved(d in disk(), phi in mobius(), w in point()) {
        let image = d.image(&phi).unwrap();
        prop_assume!(d.boundary_distance(w).abs() > 1e-6);
        let pw = phi.apply(ExtPoint::Finite(w));
        prop_assert_eq!(image.contains(pw), d.contains(ExtPoint::Finite(w)));
    }

    #[test]
    fn median_commutes_with_moebius(d1 in disk(), d2 in disk(), phi in mobius()) {
        let rel = classify_pair(&d1, &d2);
        prop_assume!(matches!(rel, Ok(PairRelation::Annulus | PairRelation::Lens(_) | PairRelation::Tangent(_))));
        let m = median_circline(&d1, &d2).unwrap();
        let m_image = median_circline(&d1.image(&phi).unwrap(), &d2.image(&phi).unwrap()).unwrap();
        prop_assert!(m.apply(&phi).approx_eq(&m_image, 1e-9));
    }

    #[test]
    fn boundary_orientation_is_outward(d in disk(), u in 0.01..0.99f64) {
        let arc = OrientedArc::boundary(&d);
        let (t0, t1) = arc.params();
        let t = t0 + u * (t1 - t0);
        let (z, v) = arc.sample(t);
        prop_assume!(z.is_finite() && v.norm() > 1e-12);
        let normal = d.outward_normal(z);
        let turned = v / Complex64::i() / v.norm();
        prop_assert!((turned - normal).norm() < 1e-9, "{turned} vs {normal}");
    }

    #[test]
    fn normalization_pulls_back_to_the_pair(d1 in disk(), d2 in disk()) {
        let rel = classify_pair(&d1, &d2);
        prop_assume!(matches!(rel, Ok(PairRelation::Annulus | PairRelation::Lens(_) | PairRelation::Tangent(_))));
        let config = normalize_pair(&d1, &d2, &[]).unwrap();
        let expected = match rel.unwrap() {
            PairRelation::Annulus => matches!(config.case, PairCase::Annulus { r } if r > 1.0),
            PairRelation::Lens(_) => matches!(config.case, PairCase::Sector { theta } if theta > 0.0 && theta < PI / 2.0),
            _ => matches!(config.case, PairCase::Strip),
        };
        prop_assert!(expected, "{:?}", config.case);
        let (p1, p2) = config.pulled_back().unwrap();
        prop_assert!(forms_close(&p1.form(), &d1.form(), 1e-9), "{p1:?} vs {d1:?}");
        prop_assert!(forms_close(&p2.form(), &d2.form(), 1e-9), "{p2:?} vs {d2:?}");
    }
}

#[test]
fn canonical_pairs_have_expected_medians() {
    let annulus = [GeneralizedDisk::disk(c(0.0, 0.0), 2.0), GeneralizedDisk::exterior(c(0.0, 0.0), 0.5)];
    assert!(median_circline(&annulus[0], &annulus[1])
        .unwrap()
        .approx_eq(&GeneralizedDisk::disk(c(0.0, 0.0), 1.0).boundary(), 1e-12));
    let strip = [
        GeneralizedDisk::half_plane(-PI / 2.0, c(0.0, 1.0)),
        GeneralizedDisk::half_plane(PI / 2.0, c(0.0, -1.0)),
    ];
    let m = median_circline(&strip[0], &strip[1]).unwrap();
    for x in [-3.0, 0.0, 5.0] {
        assert!(m.contains_point(ExtPoint::Finite(c(x, 0.0)), 1e-12));
    }
    assert!(m.contains_point(ExtPoint::Infinity, 1e-12));
}
