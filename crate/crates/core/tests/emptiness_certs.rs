use std::time::{Duration, Instant};

use uhfree_core::emptiness::{
    emptiness_certificate, graded_emptiness, verify_certificate, CertificateFile, Side,
};
use uhfree_core::poly::Vars;
use uhfree_core::Error;

#[test]
fn small_shapes_finish_quickly() {
    for (m, n) in [(3, 2), (2, 3), (3, 3)] {
        let t = Instant::now();
        let c = emptiness_certificate(m, n).unwrap();
        assert!(t.elapsed() < Duration::from_secs(1), "sl({m}|{n}) took {:?}", t.elapsed());
        assert_eq!(c.branches.len(), 16 * (m - 1));
        assert!(c.rechecked && c.pairs_checked && c.canon_demo.passed);
        assert!(verify_certificate(&c.to_file()).unwrap().passed());
    }
}

#[test]
fn displayed_branch_matches_hand_expansion() {
    let c = emptiness_certificate(2, 2).unwrap();
    let vars = Vars::new(2, 2);
    let d = c.displayed().unwrap();
    let expand = |s: &str| vars.format(&vars.parse(s).unwrap());
    let a = d.route_a.mat.format(&vars);
    let b = d.route_b.mat.format(&vars);
    // hb1*(h1 + hb1 - h2 + 1), (hb1 - 1)*(h1 + hb1 - h2), (h1 + 1)*h2, h1*(h2 - 1)
    assert_eq!(a[0][0], expand("h1*hb1 + hb1^2 - h2*hb1 + hb1"));
    assert_eq!(a[1][1], expand("h1*hb1 + hb1^2 - h2*hb1 - h1 - hb1 + h2"));
    assert_eq!(b[0][0], expand("h1*h2 + h2"));
    assert_eq!(b[1][1], expand("h1*h2 - h1"));
    assert_eq!(a[0][1], "0");
    assert_eq!(b[1][0], "0");
    assert_eq!(d.route_a.scalar.to_string(), "a[2,b1]/a[1,b1]");
    assert_eq!(d.route_b.scalar.to_string(), "a[2,b2]/a[1,b2]");

    let w = d.witness.support.as_ref().unwrap();
    assert_eq!((w.monomial.as_str(), w.side), ("hb1^2", Side::A));
    let hb1 = 2;
    for row in &d.route_b.mat.entries()[..] {
        for p in row {
            assert!(!p.uses_var(hb1));
        }
    }
    let e = d.witness.evaluation.as_ref().unwrap();
    assert!(d.witness.recheck(&d.route_a.mat, &d.route_b.mat, &vars).unwrap(), "{e:?}");
}

#[test]
fn graded_variant_and_scope() {
    let c = graded_emptiness(2, 2).unwrap();
    assert!(c.graded);
    assert!(c.report().contains("graded"));
    assert!(graded_emptiness(3, 3).unwrap().all_dead());
    assert!(matches!(graded_emptiness(2, 1), Err(Error::OutOfScope(_))));
}

#[test]
fn json_round_trip_and_tampering() {
    let c = emptiness_certificate(2, 3).unwrap();
    let text = c.to_json();
    let file: CertificateFile = serde_json::from_str(&text).unwrap();
    assert_eq!(file, c.to_file());
    assert!(verify_certificate(&file).unwrap().passed());

    let mut wrong_route = file.clone();
    wrong_route.branches[0].route_a.matrix[0][0] = "h1".into();
    assert!(!verify_certificate(&wrong_route).unwrap().passed());

    let mut dropped = file.clone();
    dropped.branches.pop();
    assert!(!verify_certificate(&dropped).unwrap().passed());

    let mut bad_point = file.clone();
    for b in &mut bad_point.branches {
        if let Some(e) = &mut b.witness.evaluation {
            e.point = vec![100; e.point.len() + 1];
        }
    }
    assert!(!verify_certificate(&bad_point).unwrap().passed());

    let mut future = file;
    future.version = 2;
    assert!(verify_certificate(&future).is_err());
}
