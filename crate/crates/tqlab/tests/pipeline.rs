use num_complex::Complex64;
use tqlab::bethe::{BetheSystem, NewtonConfig};
use tqlab::cartan::CartanDatum;
use tqlab::grring::{tq_relation, verify_tq, Flavor, TQRelation};
use tqlab::qchar::{fm_fundamental, FMConfig};
use tqlab::scalars::{eval_ratfn, EvalPoint};
use tqlab::sl2lab::{baxter_residual, transfer_fundamental_sl2, transfer_sl2};
use tqlab::ymono::SpectralPoint;

#[test]
fn tq_relations_hold_and_round_trip_through_json() {
    for (label, node) in [("A1", 1), ("A2", 1), ("A2", 2), ("A3", 2), ("B2", 1), ("B2", 2)] {
        let cd = CartanDatum::from_label(label).unwrap();
        let chi = fm_fundamental(&cd, node, &SpectralPoint::q_pow(0), FMConfig::default()).unwrap().chi;
        let rel = tq_relation(&cd, &chi, Flavor::LPlus).unwrap();
        assert!(verify_tq(&cd, &rel, &chi).unwrap(), "{label} node {node}");
        let back = TQRelation::from_json(&rel.to_json()).unwrap();
        assert_eq!(back.to_latex(), rel.to_latex());
        assert_eq!(rel.rhs.len(), chi.len());
    }
}

#[test]
fn numeric_bethe_root_matches_exact_root() {
    let sys = BetheSystem::sl2_kr(&[(1, None)], 1).unwrap();
    let exact = sys.solve_closed_single().unwrap();
    for seed in [1u64, 2, 3] {
        let point = EvalPoint::random(seed);
        let v = Complex64::new(0.4, -0.2);
        let sols = sys.solve_numeric(&point, &[v], &NewtonConfig::default()).unwrap();
        assert_eq!(sols.len(), 1);
        let w = eval_ratfn(&exact, &point, v).unwrap();
        assert!((sols[0].roots[0][0] - w).norm() < 1e-10 * w.norm().max(1.0));
    }
}

#[test]
fn baxter_relation_with_exact_q_operator() {
    let point = EvalPoint::random(11);
    let u = Complex64::new(0.18, -0.05);
    for n in 1..=2usize {
        let t = transfer_fundamental_sl2(n, &point, u, 8).unwrap();
        let exact = transfer_sl2(n, 4 * n + 3).unwrap();
        for j in 0..=n {
            let rec = exact.q_poly(j).reconstruct(2 * n).unwrap();
            let qc: Vec<Complex64> = rec.iter().map(|r| eval_ratfn(r.as_ref().unwrap(), &point, u * u).unwrap()).collect();
            let r = baxter_residual(n, j, &t[j], &qc, &point, u).unwrap();
            assert!(r < 1e-9, "N={n} j={j} residual {r}");
        }
    }
}
