mod common;

use common::{su2_rep, u2_plus_line, Draw};
use mmflow::algebra::{
    group_action, infinitesimal_action, make_torus_rep, stabilizer_algebra, LieVector, Point, Representation, C64,
    DEFAULT_STABILIZER_TOL,
};
use mmflow::flow::{analyze_limit, integrate_flow, projected_flow, FlowField, FlowParams};
use mmflow::git::{classify_stability, destabilizer, one_ps_energy, OnePS};
use mmflow::scenario::{parse_scenario, serialize_scenario, trajectory_csv, Analysis, RepresentationSpec, Scenario};
use mmflow::symplectic::{moment_pairing, moment_vector, Chart};
use proptest::prelude::*;

fn torus_strategy(max_d: usize, max_r: usize, wmax: i64) -> impl Strategy<Value = (usize, Vec<Vec<i64>>)> {
    (1..=max_r, 1..=max_d).prop_flat_map(move |(r, d)| {
        (Just(r), prop::collection::vec(prop::collection::vec(-wmax..=wmax, r), d))
    })
}

fn point_strategy(d: usize) -> impl Strategy<Value = Point> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0, prop::bool::weighted(0.2)), d).prop_map(|v| {
        Point::from_iterator(v.len(), v.into_iter().map(|(re, im, zero)| if zero { C64::new(0.0, 0.0) } else { C64::new(re, im) }))
    })
}

fn instance(max_d: usize, max_r: usize, wmax: i64) -> impl Strategy<Value = (Representation, Point)> {
    torus_strategy(max_d, max_r, wmax).prop_flat_map(|(r, w)| {
        let rep = make_torus_rep(r, &w).unwrap();
        let d = rep.dim();
        (Just(rep), point_strategy(d))
    })
}

fn some_rep(seed: u64) -> Representation {
    let mut draw = Draw::new(seed);
    match seed % 3 {
        0 => su2_rep(),
        1 => u2_plus_line(3.0),
        _ => draw.torus(6, 3, 4),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn infinitesimal_action_is_linear(seed in any::<u64>(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let rep = some_rep(seed);
        let mut draw = Draw::new(seed ^ 1);
        let x = draw.point(rep.dim(), 1.0);
        let (xi, eta) = (draw.lie_vector(rep.algebra_dim()), draw.lie_vector(rep.algebra_dim()));
        let combined = &(&xi * a) + &(&eta * b);
        let lhs = infinitesimal_action(&rep, &combined, &x).unwrap();
        let rhs = infinitesimal_action(&rep, &xi, &x).unwrap() * C64::new(a, 0.0)
            + infinitesimal_action(&rep, &eta, &x).unwrap() * C64::new(b, 0.0);
        prop_assert!((lhs - rhs).norm() <= 1e-12);
    }

    #[test]
    fn group_action_differentiates_to_infinitesimal_action(seed in any::<u64>(), t in 0.0f64..2.0) {
        let rep = some_rep(seed);
        let mut draw = Draw::new(seed ^ 2);
        let x = draw.point(rep.dim(), 1.0);
        let xi = draw.lie_vector(rep.algebra_dim());
        let at = group_action(&rep, &xi, t, &x).unwrap();
        let sigma = infinitesimal_action(&rep, &xi, &at).unwrap();
        let err = |eps: f64| {
            let ahead = group_action(&rep, &xi, t + eps, &x).unwrap();
            ((ahead - &at) / C64::new(eps, 0.0) - &sigma).norm()
        };
        let (e4, e5) = (err(1e-4), err(1e-5));
        prop_assert!(e4 <= 1e-3 * (1.0 + sigma.norm()));
        // First-order decay, unless already at roundoff.
        prop_assert!(e5 <= 0.2 * e4 || e5 <= 1e-9);
    }

    #[test]
    fn group_action_preserves_norm(seed in any::<u64>(), t in -10.0f64..10.0) {
        let rep = some_rep(seed);
        let mut draw = Draw::new(seed ^ 3);
        let x = draw.point(rep.dim(), 1.0);
        let xi = draw.lie_vector(rep.algebra_dim());
        let y = group_action(&rep, &xi, t, &x).unwrap();
        prop_assert!((y.norm() - x.norm()).abs() <= 1e-12 * (1.0 + x.norm()));
    }

    #[test]
    fn stabilizer_vectors_fix_the_point(seed in any::<u64>()) {
        let rep = some_rep(seed);
        let mut draw = Draw::new(seed ^ 4);
        let mut x = draw.point(rep.dim(), 1.0);
        if rep.dim() > 1 {
            x[0] = C64::new(0.0, 0.0);
        }
        for xi in stabilizer_algebra(&rep, &x, DEFAULT_STABILIZER_TOL) {
            prop_assert!(rep.apply_rho(&xi, &x).norm() <= 10.0 * DEFAULT_STABILIZER_TOL * x.norm().max(1e-300));
        }
    }

    #[test]
    fn moment_map_is_exactly_quadratic(seed in any::<u64>(), t in -3.0f64..3.0) {
        let rep = some_rep(seed);
        let mut draw = Draw::new(seed ^ 5);
        let v = draw.point(rep.dim(), 1.0);
        let xi = draw.lie_vector(rep.algebra_dim());
        let scaled = moment_pairing(&rep, &(&v * C64::new(t, 0.0)), &xi, Chart::Affine).unwrap();
        let base = moment_pairing(&rep, &v, &xi, Chart::Affine).unwrap();
        prop_assert!((scaled - t * t * base).abs() <= 1e-13 * (1.0 + t * t));
    }

    #[test]
    fn projective_moment_map_is_scale_invariant(seed in any::<u64>(), re in 0.1f64..5.0, im in -5.0f64..5.0) {
        let rep = some_rep(seed);
        let mut draw = Draw::new(seed ^ 6);
        let z = draw.point(rep.dim(), 1.0);
        prop_assume!(z.norm() > 1e-6);
        let a = moment_vector(&rep, &z, Chart::Projective).unwrap();
        let b = moment_vector(&rep, &(&z * C64::new(re, im)), Chart::Projective).unwrap();
        prop_assert!((a.coords() - b.coords()).amax() <= 1e-12);
    }

    #[test]
    fn verdicts_are_scale_invariant((rep, x) in instance(6, 3, 3), re in -3.0f64..3.0, im in -3.0f64..3.0) {
        prop_assume!(re.abs() + im.abs() > 1e-3);
        let a = classify_stability(&rep, &x).unwrap();
        let b = classify_stability(&rep, &(&x * C64::new(re, im))).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!(a.verify());
    }

    #[test]
    fn verdict_chain_and_destabilizer((rep, x) in instance(6, 3, 3)) {
        let report = classify_stability(&rep, &x).unwrap();
        use mmflow::git::Verdict::*;
        match report.verdict {
            Stable => prop_assert_eq!(report.stabilizer_rank, 0),
            Polystable => prop_assert!(report.stabilizer_rank > 0 || report.support.is_empty()),
            _ => {}
        }
        if report.support.is_empty() {
            return Ok(());
        }
        let lambda = destabilizer(&rep, &x).unwrap();
        prop_assert_eq!(lambda.is_some(), report.verdict == Unstable);
        if let Some(OnePS(l)) = lambda {
            for w in &report.support_weights {
                prop_assert!(w.iter().zip(&l).map(|(a, b)| a * b).sum::<i64>() < 0);
            }
        }
    }

    #[test]
    fn energy_is_convex((rep, x) in instance(6, 3, 3), lambda in prop::collection::vec(-3i64..=3, 3), t in -2.0f64..2.0) {
        let lambda = OnePS(lambda[..rep.algebra_dim()].to_vec());
        let h = 1e-3;
        let f = |s: f64| one_ps_energy(&rep, &x, &lambda, s).unwrap();
        prop_assert!(f(t + h) - 2.0 * f(t) + f(t - h) >= -1e-12 * f(t).max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn flow_velocity_matches_samples((rep, x0) in instance(5, 2, 3)) {
        // Dense samples: the difference quotient over one short step tracks
        // the vector field.
        let params = FlowParams { max_time: 1.0, max_step: 1e-4, record_every: 1e-12, ..FlowParams::default() };
        let traj = integrate_flow(&rep, &x0, &params).unwrap();
        let field = FlowField::new(&rep);
        for pair in traj.samples.windows(2).step_by(500) {
            let dt = pair[1].t - pair[0].t;
            let quotient = (&pair[1].point - &pair[0].point) / C64::new(dt, 0.0);
            let mid = (&pair[0].point + &pair[1].point) * C64::new(0.5, 0.0);
            let v = field.velocity(&mid);
            prop_assert!((quotient.clone() - &v).norm() <= 1e-5 * (1.0 + v.norm()), "dt {} err {} v {}", dt, (quotient - &v).norm(), v.norm());
        }
    }

    #[test]
    fn limits_gain_symmetry((rep, x0) in instance(5, 2, 3)) {
        let traj = integrate_flow(&rep, &x0, &FlowParams::default()).unwrap();
        let limit = analyze_limit(&rep, &traj, &x0);
        prop_assert!(limit.stabilizer_dim >= limit.initial_stabilizer_dim);
        prop_assert!(limit.limit.norm().is_finite());
    }

    #[test]
    fn trajectory_csv_has_one_row_per_sample((rep, x0) in instance(4, 2, 2)) {
        let traj = integrate_flow(&rep, &x0, &FlowParams { max_time: 5.0, ..FlowParams::default() }).unwrap();
        let csv = trajectory_csv(&traj);
        prop_assert_eq!(csv.lines().count(), traj.samples.len() + 1);
        let cols = 3 + 2 * rep.dim();
        prop_assert!(csv.lines().all(|l| l.split(',').count() == cols));
    }

    #[test]
    fn scenarios_round_trip(
        (r, weights) in torus_strategy(5, 2, 4),
        seed in any::<u64>(),
        max_time in 1.0f64..1e5,
        analyses in prop::sample::subsequence(
            vec![Analysis::Classify, Analysis::Flow, Analysis::Dichotomy, Analysis::ProjectedFlow, Analysis::Nu, Analysis::KempfNessRay],
            1..=6,
        ),
        projective in any::<bool>(),
    ) {
        let _ = r;
        let mut draw = Draw::new(seed);
        let start = (0..weights.len()).map(|_| [draw.uniform(-1.0, 1.0), draw.uniform(-1.0, 1.0)]).collect();
        let s = Scenario {
            representation: RepresentationSpec::Torus { weights },
            space: if projective { Chart::Projective } else { Chart::Affine },
            start,
            flow: FlowParams { max_time, ..FlowParams::default() },
            analyses,
            seed,
            output_dir: format!("out-{seed}"),
        };
        prop_assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s);
    }
}

#[test]
fn empty_torus_matches_plain_flow_on_random_instances() {
    let mut draw = Draw::new(11);
    let params = FlowParams { max_time: 20.0, ..FlowParams::default() };
    for _ in 0..20 {
        let rep = draw.torus(6, 2, 3);
        let x0 = draw.point(rep.dim(), 1.0);
        let a = integrate_flow(&rep, &x0, &params).unwrap();
        let b = projected_flow(&rep, &x0, &[], &params).unwrap();
        assert_eq!(a.samples.len(), b.samples.len());
        for (s, t) in a.samples.iter().zip(&b.samples) {
            assert!((&s.point - &t.point).norm() <= 1e-9);
        }
    }
}

#[test]
fn full_torus_projection_freezes_the_flow() {
    let rep = make_torus_rep(2, &[vec![1, 0], vec![-1, 0], vec![0, 1]]).unwrap();
    let x0 = Point::from_vec(vec![C64::new(0.3, 0.1), C64::new(1.0, 0.0), C64::new(0.0, 0.5)]);
    let all = vec![LieVector::basis(2, 0), LieVector::basis(2, 1)];
    let traj = projected_flow(&rep, &x0, &all, &FlowParams::default()).unwrap();
    assert_eq!(traj.terminal, x0);
}
