use approx::{assert_abs_diff_eq, assert_relative_eq};
use ergomax::averages::{alpha_karp, exact_inf_time_average, horizon_table};
use ergomax::convex::{biconjugate_check, bilinear_minimax, conjugate, BilinearGame, ConjugateMethod, ExtReal, GridConvexFunction};
use ergomax::fixtures::{golden_mean, three_point_system};
use ergomax::graph::trim_and_recode;
use ergomax::pressure::{gibbs_chain, PressureEvaluation, PressureKind};
use ergomax::symbolic::EventuallyPeriodicPoint;
use num_rational::Rational64;

fn r(n: i64, d: i64) -> Rational64 {
    Rational64::new(n, d)
}

#[test]
fn three_point_system_in_exact_arithmetic() {
    for a in [r(-1, 2), r(1, 4), r(3, 4), r(2, 1)] {
        let system = three_point_system(a);
        let g = trim_and_recode(&system).unwrap();
        assert_eq!(alpha_karp(&g).value, r(1, 2));
        let p = EventuallyPeriodicPoint::parse("a|1,0", &system).unwrap();
        let prof = exact_inf_time_average(&p, &system).unwrap();
        assert_eq!(prof.liminf, r(1, 2));
        let sup = a.max(r(1, 2)).max(r(1, 2) + a / 2).max(r(1, 2) + (a - r(1, 2)) / 3);
        assert_eq!(prof.sup_over_n, sup);
        let table = horizon_table(&g, 20).unwrap();
        assert!(table.rows.iter().all(|&(_, v)| v >= r(1, 2)));
    }
}

#[test]
fn single_precision_alpha() {
    let g = trim_and_recode(&three_point_system(0.25f32)).unwrap();
    assert_relative_eq!(alpha_karp(&g).value, 0.5f32);
}

#[test]
fn parry_measure_of_golden_mean() {
    let gamma = PressureEvaluation::new(PressureKind::Spectral, &golden_mean([0.0, 0.0])).unwrap();
    let phi = gamma.graph_potential();
    let g = (1.0 + 5f64.sqrt()) / 2.0;
    assert_abs_diff_eq!(gamma.evaluate(&phi).unwrap(), g.ln(), epsilon = 1e-12);
    let mu = gibbs_chain(&gamma, &phi).unwrap();
    assert_abs_diff_eq!(mu.transitions[0][0], 1.0 / g, epsilon = 1e-12);
    assert_abs_diff_eq!(mu.transitions[0][1], 1.0 / (g * g), epsilon = 1e-12);
}

#[test]
fn half_quadratic_is_nearly_self_conjugate() {
    let xs = GridConvexFunction::<f64>::axis(-3.0, 0.1, 61);
    let f = GridConvexFunction::from_fn(vec![xs], |x| ExtReal::Finite(x[0] * x[0] / 2.0)).unwrap();
    let ys = GridConvexFunction::<f64>::axis(-2.0, 0.25, 17);
    let c = conjugate(&f, vec![ys.clone()], ConjugateMethod::LowerEnvelope).unwrap();
    for (y, v) in ys.iter().zip(&c.function.values) {
        assert_abs_diff_eq!(v.finite().unwrap(), y * y / 2.0, epsilon = 5e-3);
    }
}

#[test]
fn support_function_of_an_interval() {
    let xs = GridConvexFunction::<f64>::axis(-2.0, 0.5, 9);
    let f = GridConvexFunction::from_fn(vec![xs], |x| if x[0].abs() <= 1.0 { ExtReal::Finite(0.0) } else { ExtReal::PosInf }).unwrap();
    let ys = vec![-3.0, -0.5, 0.0, 1.5];
    let c = conjugate(&f, vec![ys.clone()], ConjugateMethod::BruteForce).unwrap();
    for (y, v) in ys.iter().zip(&c.function.values) {
        assert_eq!(*v, ExtReal::Finite(y.abs()));
    }
}

#[test]
fn two_point_indicator_is_not_convex() {
    let xs = GridConvexFunction::<f64>::axis(-2.0, 0.5, 9);
    let f = GridConvexFunction::from_fn(vec![xs], |x| {
        if (x[0].abs() - 1.0).abs() < 1e-12 {
            ExtReal::Finite(0.0)
        } else {
            ExtReal::PosInf
        }
    })
    .unwrap();
    let rep = biconjugate_check(&f, 1e-12).unwrap();
    assert!(!rep.convex);
    let expected: Vec<ExtReal<f64>> =
        (0..9).map(|i| if (2..=6).contains(&i) { ExtReal::Finite(0.0) } else { ExtReal::PosInf }).collect();
    assert_eq!(rep.biconjugate.values, expected);
}

#[test]
fn small_bilinear_games() {
    let constant = BilinearGame::new(vec![vec![r(3, 2), r(3, 2)]], 2, vec![]).unwrap();
    let rep = bilinear_minimax(&constant).unwrap();
    assert_eq!((rep.sup_inf, rep.inf_sup), (r(3, 2), r(3, 2)));

    let simplex = BilinearGame::new(vec![vec![r(1, 1), r(0, 1)], vec![r(0, 1), r(1, 1)]], 2, vec![r(0, 1), r(0, 1)]).unwrap();
    let rep = bilinear_minimax(&simplex).unwrap();
    assert!(rep.exact);
    assert_eq!((rep.sup_inf, rep.inf_sup), (r(1, 2), r(1, 2)));
    assert_eq!(rep.mu, vec![r(1, 2), r(1, 2)]);
}
