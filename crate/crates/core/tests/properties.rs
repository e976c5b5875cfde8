//! Invariants of the matrix, kernel, system, controllability and synthesis
//! routines over random small integer systems.

use delayctl_core::*;
use num_traits::Zero;
use proptest::prelude::*;

fn q(x: i64) -> Rational {
    Rational::from_i64(x)
}

fn int_matrix(rows: usize, cols: usize, lo: i64, hi: i64) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec(lo..=hi, rows * cols)
        .prop_map(move |xs| Matrix::new(rows, cols, xs.into_iter().map(q).collect()).unwrap())
}

fn rational_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix<Rational>> {
    prop::collection::vec((-9i64..=9, 1i64..=4), rows * cols)
        .prop_map(move |xs| Matrix::new(rows, cols, xs.into_iter().map(|(n, d)| q(n) / q(d)).collect()).unwrap())
}

fn vector(len: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Rational>> {
    prop::collection::vec(lo..=hi, len).prop_map(|xs| xs.into_iter().map(q).collect())
}

/// `(d, k, p)` with `d ≤ 4`, `k ≤ min(2, d)`, `p ≤ 3`.
fn dims() -> impl Strategy<Value = (usize, usize, usize)> {
    (1usize..=4, 1usize..=2, 1usize..=3).prop_map(|(d, k, p)| (d, k.min(d), p))
}

fn system() -> impl Strategy<Value = DelaySystem<Rational>> {
    dims().prop_flat_map(|(d, k, p)| {
        (int_matrix(d, d, -2, 2), int_matrix(d, d, -2, 2), int_matrix(d, k, -2, 2))
            .prop_map(move |(a, b, c)| DelaySystem::new(a, b, c, p).unwrap())
    })
}

fn history(p: usize, d: usize) -> impl Strategy<Value = InitialHistory<Rational>> {
    prop::collection::vec(vector(d, -5, 5), p + 1).prop_map(move |vs| InitialHistory::new(p, vs).unwrap())
}

fn controls(len: usize, k: usize) -> impl Strategy<Value = ControlSequence<Rational>> {
    prop::collection::vec(vector(k, -5, 5), len).prop_map(move |vs| ControlSequence::new(k, vs).unwrap())
}

fn problem(
) -> impl Strategy<Value = (DelaySystem<Rational>, InitialHistory<Rational>, ControlSequence<Rational>, usize)> {
    system().prop_flat_map(|sys| {
        let (p, d, k) = (sys.delay(), sys.dim(), sys.inputs());
        (Just(sys), history(p, d), 1usize..=12)
            .prop_flat_map(move |(sys, h, r1)| (Just(sys), Just(h), controls(r1, k), Just(r1)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn product_associates_and_transposes(a in rational_matrix(3, 2), b in rational_matrix(2, 4), c in rational_matrix(4, 2)) {
        let left = a.mul(&b).unwrap().mul(&c).unwrap();
        let right = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
        prop_assert_eq!(a.mul(&b).unwrap().transpose(), b.transpose().mul(&a.transpose()).unwrap());
    }

    #[test]
    fn rank_of_transpose(a in int_matrix(3, 5, -2, 2), b in rational_matrix(4, 3)) {
        prop_assert_eq!(a.rank(), a.transpose().rank());
        prop_assert_eq!(b.rank(), b.transpose().rank());
    }

    #[test]
    fn rank_float_matches_exact_on_small_integers(a in int_matrix(4, 6, -2, 2)) {
        prop_assert_eq!(a.map(|x| x.to_f64()).rank(), a.rank());
    }

    #[test]
    fn solve_round_trip(a in rational_matrix(3, 3), rhs in rational_matrix(3, 2)) {
        match a.solve(&rhs) {
            Ok(x) => prop_assert_eq!(a.mul(&x).unwrap(), rhs),
            Err(e) => {
                prop_assert_eq!(e, Error::Singular);
                prop_assert!(a.determinant().unwrap().is_zero());
            }
        }
    }

    #[test]
    fn determinant_zero_iff_rank_deficient(a in int_matrix(4, 4, -1, 1)) {
        prop_assert_eq!(a.determinant().unwrap().is_zero(), a.rank() < 4);
    }

    #[test]
    fn q_boundary_rows(sys in system()) {
        let mut t = sys.table();
        let d = sys.dim();
        for r in -2i64..9 {
            for i in -2i64..=r + 2 {
                let v = t.q_value(r, i);
                if i < 0 || i > r || r < 0 {
                    prop_assert!(v.is_zero());
                }
            }
            if r >= 0 {
                prop_assert_eq!(t.q_value(r, 0), sys.a().pow(r as usize).unwrap());
                prop_assert_eq!(t.q_value(r, r), sys.b().pow(r as usize).unwrap());
            }
        }
        prop_assert_eq!(t.y_value(-(sys.delay() as i64)), Matrix::identity(d));
    }

    #[test]
    fn memo_agrees_with_direct_recursion(sys in system()) {
        let mut t = sys.table();
        for r in 0..7 {
            for i in 0..=r {
                prop_assert_eq!(t.q_value(r, i), q_direct(&sys, r, i));
            }
        }
    }

    #[test]
    fn kernel_recurrence(sys in system()) {
        let mut t = sys.table();
        let p = sys.delay() as i64;
        for r in -p - 3..=20 {
            let res = t.y_recurrence_residual(r);
            if r == -p - 1 {
                prop_assert_eq!(res, Matrix::identity(sys.dim()));
            } else {
                prop_assert!(res.is_zero(), "r = {}", r);
            }
        }
    }

    #[test]
    fn commuting_pairs_follow_binomial_form(
        base in int_matrix(3, 3, -2, 2),
        ca in (-2i64..=2, -2i64..=2, -1i64..=1),
        cb in (-2i64..=2, -2i64..=2, -1i64..=1),
        p in 1usize..=3,
    ) {
        let poly = |(c0, c1, c2): (i64, i64, i64)| {
            Matrix::identity(3).scale(&q(c0))
                .add(&base.scale(&q(c1))).unwrap()
                .add(&base.pow(2).unwrap().scale(&q(c2))).unwrap()
        };
        let sys = DelaySystem::new(poly(ca), poly(cb), Matrix::zeros(3, 1), p).unwrap();
        let mut t = sys.table();
        for r in 0..=12 {
            for i in 0..=r {
                prop_assert_eq!(t.q_value(r, i), t.commutative_oracle(r, i).unwrap());
            }
        }
    }

    #[test]
    fn closed_form_matches_recurrence((sys, hist, u, r1) in problem()) {
        let mut t = sys.table();
        let traj = simulate(&sys, &hist, &u, r1).unwrap();
        for r in 0..=r1 as i64 {
            let closed = closed_form_state(&mut t, &hist, &u, r).unwrap();
            prop_assert_eq!(closed.as_slice(), traj.state(r).unwrap());
        }
        prop_assert!(representation_residual(&mut t, &hist, &u, r1).unwrap().is_zero());
        prop_assert!(traj.satisfies(&sys, &hist, &u));
    }

    #[test]
    fn superposition((sys, hist, u, r1) in problem()) {
        let both = simulate(&sys, &hist, &u, r1).unwrap();
        let free = simulate(&sys, &hist, &ControlSequence::zeros(r1, sys.inputs()), r1).unwrap();
        let forced = simulate(&sys, &InitialHistory::zeros(sys.delay(), sys.dim()), &u, r1).unwrap();
        for (r, y) in both.iter() {
            let sum: Vec<Rational> = free.state(r).unwrap().iter().zip(forced.state(r).unwrap()).map(|(a, b)| a + b).collect();
            prop_assert_eq!(y, sum.as_slice());
        }
    }

    #[test]
    fn rank_stabilizes(sys in system()) {
        let mut t = sys.table();
        let s = kalman_matrix(&mut t);
        let rank = s.rank();
        let d = sys.dim() as i64;
        let mut blocks = vec![s];
        for n in d..=d + 6 {
            // add the blocks with max(r, i) == n
            for j in 0..=n {
                blocks.push(t.q_value(n, j).mul(sys.c()).unwrap());
                if j < n {
                    blocks.push(t.q_value(j, n).mul(sys.c()).unwrap());
                }
            }
            prop_assert_eq!(Matrix::hstack(&blocks).unwrap().rank(), rank, "n = {}", n);
        }
    }

    #[test]
    fn identity_a_reduces_to_krylov(b in int_matrix(3, 3, -2, 2), col in vector(3, -2, 2), p in 1usize..=3) {
        let c = Matrix::column(col).unwrap();
        let sys = DelaySystem::new(Matrix::identity(3), b.clone(), c.clone(), p).unwrap();
        let krylov = Matrix::hstack(&[c.clone(), b.mul(&c).unwrap(), b.pow(2).unwrap().mul(&c).unwrap()]).unwrap();
        prop_assert_eq!(rank_condition(&mut sys.table()).0, krylov.rank());
    }

    #[test]
    fn gramian_is_symmetric_psd(sys in system(), extra in 0usize..4, eta in vector(4, -3, 3)) {
        let mut t = sys.table();
        let r1 = system_minimal_horizon(&sys) + extra;
        let g = gramian(&mut t, r1).unwrap();
        prop_assert!(g.matrix.is_symmetric());
        let eta = &eta[..sys.dim()];
        let quad: Rational = g.matrix.mul_vec(eta).unwrap().iter().zip(eta).map(|(a, b)| a * b).sum();
        prop_assert!(quad >= q(0));
        // null directions of Γ are exactly the vectors annihilating every Y(s)C in the window
        let window = kernel_null_test(&mut t, r1 as i64 - sys.delay() as i64 - 1);
        prop_assert_eq!(window.full_rank, g.positive_definite);
        if let Some(w) = window.witness {
            let gw = g.matrix.mul_vec(&w).unwrap();
            prop_assert!(gw.iter().all(Zero::is_zero));
        }
        if quad.is_zero() && eta.iter().any(|x| !x.is_zero()) {
            prop_assert!(!g.positive_definite);
        }
    }

    #[test]
    fn criteria_agree(sys in system()) {
        let mut t = sys.table();
        let holds = rank_condition(&mut t).1;
        prop_assert_eq!(kernel_null_test_default(&mut t).full_rank, holds);
        let r_star = system_minimal_horizon(&sys);
        for r1 in r_star..=r_star + 3 {
            prop_assert_eq!(gramian(&mut t, r1).unwrap().positive_definite, holds, "r1 = {}", r1);
        }
    }

    #[test]
    fn exact_steering(sys in system(), seed in (vector(4, -5, 5), vector(4, -5, 5), vector(4, -9, 9)), extra in 0usize..=4) {
        let (d, p) = (sys.dim(), sys.delay());
        let hist = InitialHistory::new(p, vec![seed.0[..d].to_vec(); p].into_iter().chain([seed.1[..d].to_vec()]).collect()).unwrap();
        let target = &seed.2[..d];
        let r1 = system_minimal_horizon(&sys) + extra;
        let mut t = sys.table();
        match synthesize(&mut t, &hist, target, r1) {
            Ok(plan) => {
                prop_assert!(verify_plan(&t, &hist, &plan, target));
                prop_assert!(plan.residual.is_zero());
                prop_assert_eq!(plan.control.len(), r1);
                prop_assert_eq!(forced_response(&mut t, &plan.control, r1).unwrap(), plan.eta);
            }
            Err(e) => {
                prop_assert!(!rank_condition(&mut t).1);
                prop_assert!(matches!(e, Error::NotControllable { .. }), "{}", e);
            }
        }
    }
}

#[test]
fn minimal_horizon_brute_force() {
    for d in 1..=8 {
        for k in 1..=d {
            for p in 1..=4 {
                let m = (0..).find(|m| (m + 1) * k >= d).unwrap();
                assert_eq!(minimal_horizon(d, k, p), m * (p + 1) + 1, "d={d} k={k} p={p}");
            }
        }
    }
}

#[test]
fn float_mode_matches_reference_example() {
    let m = |rows: &[&[f64]]| Matrix::from_rows(rows.iter().map(|r| r.to_vec()).collect()).unwrap();
    let sys = DelaySystem::new(m(&[&[1.0, 2.0], &[0.0, 1.0]]), m(&[&[0.0, 1.0], &[1.0, 0.0]]), m(&[&[1.0], &[0.0]]), 1)
        .unwrap();
    let hist = InitialHistory::new(1, vec![vec![1.0, 0.0], vec![2.0, 1.0]]).unwrap();
    let mut t = sys.table();
    let plan = synthesize(&mut t, &hist, &[21.0, 14.0], 3).unwrap();
    let u: Vec<f64> = plan.control.values().iter().map(|v| v[0]).collect();
    for (got, want) in u.iter().zip([6.0, -2.0, -2.0]) {
        assert!((got - want).abs() <= 1e-9);
    }
    assert!(verify_plan(&t, &hist, &plan, &[21.0, 14.0]));
    assert!(representation_residual(&mut t, &hist, &plan.control, 3).unwrap() <= 1e-9);
}
