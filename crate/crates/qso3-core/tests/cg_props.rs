use qso3_core::qcg::{qcg, qcg_column, CgKey};
use qso3_core::{DeformationParam, HalfInt};

fn par(t: f64) -> DeformationParam {
    DeformationParam::new(t).unwrap()
}

fn spins(max_twice: i32) -> impl Iterator<Item = HalfInt> {
    (0..=max_twice).map(HalfInt::from_twice)
}

fn triangle_js(j1: HalfInt, j2: HalfInt) -> impl Iterator<Item = HalfInt> {
    let lo = (j1 - j2).abs().twice();
    let hi = (j1 + j2).twice();
    (lo..=hi).step_by(2).map(HalfInt::from_twice)
}

#[test]
fn coupling_matrix_is_orthogonal() {
    for tau in [-0.3, 0.0, 0.2, 0.5] {
        let p = par(tau);
        for inverted in [false, true] {
            for j1 in spins(6) {
                for j2 in spins(6) {
                    // rows: (J, M); columns: (m1, m2)
                    let mut rows: Vec<Vec<f64>> = Vec::new();
                    let cols: Vec<(HalfInt, HalfInt)> =
                        j1.projections().flat_map(|a| j2.projections().map(move |b| (a, b))).collect();
                    for j in triangle_js(j1, j2) {
                        for m in j.projections() {
                            let row = cols
                                .iter()
                                .map(|&(m1, m2)| {
                                    let key = CgKey::new(j1, m1, j2, m2, j, m, inverted).unwrap();
                                    qcg(&key, p)
                                })
                                .collect();
                            rows.push(row);
                        }
                    }
                    assert_eq!(rows.len(), cols.len());
                    let n = cols.len();
                    let mut worst: f64 = 0.0;
                    for a in 0..n {
                        for b in 0..n {
                            let g: f64 = rows.iter().map(|r| r[a] * r[b]).sum();
                            worst = worst.max((g - if a == b { 1.0 } else { 0.0 }).abs());
                        }
                    }
                    assert!(worst < 1e-11, "j1={j1} j2={j2} tau={tau}: {worst:e}");
                }
            }
        }
    }
}

#[test]
fn base_inversion_is_evaluation_at_inverse_q() {
    let key = CgKey::ints(2, 1, 1, -1, 2, 0).unwrap();
    assert_eq!(qcg(&key.inverted(), par(0.3)), qcg(&key, par(-0.3)));
}

#[test]
fn classical_values() {
    let p = par(0.0);
    let c = |j1, m1, j2, m2, j, m| qcg(&CgKey::ints(j1, m1, j2, m2, j, m).unwrap(), p);
    assert!((c(1, 1, 1, -1, 0, 0) - 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((c(1, 0, 1, 0, 0, 0) + 1.0 / 3f64.sqrt()).abs() < 1e-15);
    assert!((c(1, 1, 1, 0, 2, 1) - 0.5f64.sqrt()).abs() < 1e-15);
    assert!((c(2, 2, 2, 0, 2, 2) - (2.0f64 / 7.0).sqrt()).abs() < 1e-15);
    assert!((c(1, 0, 1, 0, 1, 0)).abs() < 1e-15);
}

#[test]
fn near_classical_limit_is_continuous() {
    for (j1, j2, j) in [(1, 1, 2), (2, 1, 2), (2, 2, 2), (3, 2, 4)] {
        let col0 = qcg_column(j1.into(), j2.into(), j.into(), 0.into(), false, par(0.0)).unwrap();
        let col = qcg_column(j1.into(), j2.into(), j.into(), 0.into(), false, par(1e-9)).unwrap();
        for (m1, m2, c) in &col {
            let c0 = col0.iter().find(|e| e.0 == *m1 && e.1 == *m2).map_or(0.0, |e| e.2);
            assert!((c - c0).abs() < 1e-7);
        }
    }
}
