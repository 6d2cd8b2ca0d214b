use nileta_core::classify::{classify, Verdict};
use nileta_core::cyclo::{divided_congruence_member, CycloRational, CyclotomicField, QSeries};
use nileta_core::eta::{
    discriminant_sum, eta_adiabatic, eta_via_positive_twist, general_lift, parity_identity_sides, rank2_lift,
    Rank2ClosedForm,
};
use nileta_core::lattice::{qbar, SmithLift};
use nileta_core::linalg::{determinant, mat_mul, IntMatrix};
use nileta_core::oracle;
use nileta_core::rational::{int, rat, QmodZ, Rational};
use nileta_core::spectral::{
    base_eta_reduced, gram_eigenvalues, kernel_labels, vertical_eigenvalue, vertical_spectrum, EntryLabel,
};
use nileta_core::{EvenLattice, DEFAULT_ENUM_CAP as CAP};
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

fn lattice(rank: usize, max_diag: i64, max_off: i64) -> impl Strategy<Value = EvenLattice> {
    let diag = proptest::collection::vec(1..=max_diag / 2, rank);
    let off = proptest::collection::vec(-max_off..=max_off, rank * (rank - 1) / 2);
    (diag, off).prop_filter_map("not positive definite", move |(d, o)| {
        let mut g = vec![vec![0i64; rank]; rank];
        let mut it = o.into_iter();
        for i in 0..rank {
            g[i][i] = 2 * d[i];
            for j in 0..i {
                let x = it.next().unwrap();
                g[i][j] = x;
                g[j][i] = x;
            }
        }
        EvenLattice::new(g).ok()
    })
}

fn small_lattice() -> impl Strategy<Value = EvenLattice> {
    prop_oneof![lattice(1, 8, 0), lattice(2, 8, 3), lattice(3, 4, 1)]
}

fn twist() -> impl Strategy<Value = i64> {
    prop_oneof![-3i64..=-1, 1i64..=3]
}

/// Product of elementary column operations `col_i += k col_j`.
fn unimodular(rank: usize) -> impl Strategy<Value = IntMatrix> {
    proptest::collection::vec((0..rank, 0..rank, -2i64..=2), 0..6).prop_map(move |ops| {
        let mut u: IntMatrix = (0..rank).map(|i| (0..rank).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k) in ops {
            if i != j {
                for row in u.iter_mut() {
                    row[i] += k * row[j];
                }
            }
        }
        u
    })
}

fn transpose(m: &IntMatrix) -> IntMatrix {
    (0..m.len()).map(|i| m.iter().map(|row| row[i]).collect()).collect()
}

fn sorted(mut v: Vec<QmodZ>) -> Vec<QmodZ> {
    v.sort_by(|a, b| a.value().cmp(b.value()));
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn snf_round_trip(l in small_lattice()) {
        let snf = l.smith();
        let sbt = mat_mul(&mat_mul(&snf.s, l.gram()).unwrap(), &snf.t).unwrap();
        prop_assert_eq!(sbt, snf.diag_matrix());
        prop_assert_eq!(determinant(&snf.s).abs(), BigInt::from(1));
        prop_assert_eq!(determinant(&snf.t).abs(), BigInt::from(1));
        for w in snf.diag.windows(2) {
            prop_assert_eq!(w[1] % w[0], 0);
        }
    }

    #[test]
    fn qbar_is_well_defined(l in small_lattice(), d in twist(), shift in proptest::collection::vec(-3i64..=3, 3)) {
        let lift = SmithLift::new(&l, d, CAP).unwrap();
        for idx in 0..lift.order().min(16) {
            let rho = lift.representative(idx);
            let moved: Vec<Rational> = rho.iter().zip(&shift).map(|(x, k)| x + int(*k)).collect();
            prop_assert_eq!(qbar(&l, d, &rho).unwrap(), qbar(&l, d, &moved).unwrap());
        }
    }

    #[test]
    fn order_is_multiplicative(l in small_lattice(), d in -5i64..=5) {
        prop_assume!(d != 0);
        let order = SmithLift::new(&l, d, CAP).unwrap().order();
        prop_assert_eq!(order, d.unsigned_abs().pow(l.rank() as u32) * l.det() as u64);
    }

    #[test]
    fn qbar_multiset_is_basis_independent(l in lattice(2, 8, 3), u in unimodular(2), d in twist()) {
        let g = mat_mul(&mat_mul(&transpose(&u), l.gram()).unwrap(), &u).unwrap();
        let other = EvenLattice::new(g).unwrap();
        let a = sorted(SmithLift::new(&l, d, CAP).unwrap().qbar_values());
        let b = sorted(SmithLift::new(&other, d, CAP).unwrap().qbar_values());
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a, sorted(oracle::qbar_values(&l, d, CAP).unwrap()));
    }

    #[test]
    fn eta_matches_oracle(l in prop_oneof![lattice(1, 8, 0), lattice(2, 6, 2)], d in twist()) {
        prop_assert_eq!(eta_adiabatic(&l, d, CAP).unwrap(), oracle::eta(&l, d, CAP).unwrap());
    }

    #[test]
    fn eta_matches_oracle_rank_three(l in lattice(3, 4, 1), d in prop_oneof![Just(-1i64), Just(1)]) {
        prop_assert_eq!(eta_adiabatic(&l, d, CAP).unwrap(), oracle::eta(&l, d, CAP).unwrap());
    }

    #[test]
    fn antisymmetry_and_rewriting(l in small_lattice(), d in 1i64..=4) {
        let plus = discriminant_sum(&l, d, CAP).unwrap();
        let minus = discriminant_sum(&l, -d, CAP).unwrap();
        prop_assert_eq!(minus, -plus);
        for t in [d, -d] {
            prop_assert_eq!(eta_via_positive_twist(&l, t, CAP).unwrap(), eta_adiabatic(&l, t, CAP).unwrap());
            let (lhs, rhs) = parity_identity_sides(&l, t);
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rank_two_closed_form_and_lift(l in lattice(2, 8, 3)) {
        let closed = Rank2ClosedForm::new(&l).unwrap();
        let lift = rank2_lift(&l, CAP).unwrap();
        prop_assert!((&lift.alpha * BigInt::from(12)).is_integer());
        let general = general_lift(&l, 8, CAP).unwrap();
        for d in 1..=8 {
            let s = oracle::discriminant_sum(&l, d, CAP).unwrap();
            prop_assert_eq!(QmodZ::new(closed.evaluate(d)), s.clone());
            prop_assert_eq!(lift.residue_at(d), s.clone());
            prop_assert_eq!(general.residue_at(d), s);
        }
    }

    #[test]
    fn general_lift_rank_three(l in lattice(3, 4, 1)) {
        let lift = general_lift(&l, 6, CAP).unwrap();
        prop_assert!(lift.admissible());
        prop_assert!(lift.collapse_holds());
    }

    #[test]
    fn adiabatic_consistency(l in small_lattice(), d in twist()) {
        prop_assert_eq!(base_eta_reduced(&l, d, CAP).unwrap(), eta_adiabatic(&l, d, CAP).unwrap());
    }

    #[test]
    fn vertical_spectrum_structure(l in prop_oneof![lattice(1, 8, 0), lattice(2, 6, 2)], d in twist()) {
        let report = vertical_spectrum(&l, d, 2, CAP).unwrap();
        let nu = gram_eigenvalues(&l).unwrap().eigenvalues;
        let scale = l.trace() as f64 * d.unsigned_abs() as f64;
        let sign: i8 = if d < 0 { -1 } else { 1 };
        for label in kernel_labels(&report, scale) {
            match label {
                EntryLabel::Vertical { n, s } => {
                    prop_assert!(n.iter().all(|&k| k == 0));
                    prop_assert!(s.iter().all(|&x| x == sign));
                }
                _ => prop_assert!(false, "base label in vertical spectrum"),
            }
        }
        for e in &report.entries {
            let v = e.value.to_f64();
            prop_assert!(v > -1e-9);
            if let EntryLabel::Vertical { n, s } = &e.label {
                prop_assert!((vertical_eigenvalue(&nu, d, n, s) - v).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn verdict_depends_on_rank_and_parity(l in lattice(2, 6, 2)) {
        let expected = if l.det() % 2 == 1 { Verdict::NontrivialPi6 } else { Verdict::Trivial };
        let v = classify(&l, CAP).unwrap();
        prop_assert_eq!(v.verdict, expected);
        prop_assert!(v.evidence.iter().all(|e| e.passed));
    }
}

fn random_series(level: u32, order: usize) -> impl Strategy<Value = QSeries> {
    let field = CyclotomicField::new(level).unwrap();
    let width = field.degree() * order;
    proptest::collection::vec((-6i64..=6, prop_oneof![Just(1i64), Just(2), Just(3), Just(6)]), width).prop_map(
        move |raw| {
            let deg = field.degree();
            let coeffs = raw
                .chunks(deg)
                .map(|c| CycloRational::from_coords(&field, c.iter().map(|&(p, q)| rat(p, q)).collect()).unwrap())
                .collect();
            QSeries::new(&field, None, coeffs)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn congruence_verdicts_are_sound(
        target in random_series(3, 4),
        basis in proptest::collection::vec(random_series(3, 4), 0..3),
        integral in proptest::collection::vec(-3i64..=3, 8),
        lambda in proptest::collection::vec((-4i64..=4, 1i64..=4), 3),
    ) {
        let v = divided_congruence_member(&target, &basis, 4).unwrap();
        if v.member_up_to_order {
            prop_assert!(v.residual.is_integral());
        }
        // A constructed member is always recognised.
        let field = target.field().clone();
        let coeffs = integral
            .chunks(2)
            .map(|c| CycloRational::from_coords(&field, c.iter().map(|&x| int(x)).collect()).unwrap())
            .collect();
        let mut built = QSeries::new(&field, None, coeffs);
        for (b, (p, q)) in basis.iter().zip(&lambda) {
            built = built.add(&b.scale(&rat(*p, *q))).unwrap();
        }
        let w = divided_congruence_member(&built, &basis, 4).unwrap();
        prop_assert!(w.member_up_to_order);
        prop_assert!(w.residual.is_integral());
    }
}
