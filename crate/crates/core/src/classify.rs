use serde::Serialize;
use serde_json::{json, Value};

use crate::cyclo::{
    divided_congruence_member, eisenstein_qexp, f_invariant_series_for, lift_series, nu_squared_series,
    top_form_series,
};
use crate::error::{Error, Result};
use crate::eta::{general_lift, rank2_lift, RANK2_CERTIFIED_RANGE};
use crate::lattice::EvenLattice;
use crate::rational::{format_rational, int, rat};

pub const CHECK_LEVEL: u32 = 3;
pub const CHECK_ORDER: usize = 20;
pub const GENERAL_LIFT_MAX_RANGE: i64 = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    #[serde(rename = "NONTRIVIAL_PI6")]
    NontrivialPi6,
    Trivial,
    #[serde(rename = "FILTRATION_GT_2")]
    FiltrationGt2,
    #[serde(rename = "FILTRATION_GT_2_HENCE_TRIVIAL")]
    FiltrationGt2HenceTrivial,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::NontrivialPi6 => "NONTRIVIAL_PI6",
            Verdict::Trivial => "TRIVIAL",
            Verdict::FiltrationGt2 => "FILTRATION_GT_2",
            Verdict::FiltrationGt2HenceTrivial => "FILTRATION_GT_2_HENCE_TRIVIAL",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evidence {
    pub check: &'static str,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HomotopyVerdict {
    pub rank: usize,
    pub disc: i64,
    pub disc_parity: &'static str,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
}

fn parity(disc: i64) -> &'static str {
    if disc % 2 == 0 {
        "even"
    } else {
        "odd"
    }
}

fn require(evidence: &[Evidence]) -> Result<()> {
    match evidence.iter().find(|e| !e.passed) {
        None => Ok(()),
        Some(e) => Err(Error::InternalMismatch(format!("classify check '{}' failed: {}", e.check, e.detail))),
    }
}

/// Largest `D ≤ 10` with `D^r |dis Λ| ≤ cap`.
pub fn general_lift_range(l: &EvenLattice, cap: u64) -> i64 {
    (1..=GENERAL_LIFT_MAX_RANGE)
        .take_while(|&d| l.discriminant_order(d).is_some_and(|o| o <= u128::from(cap)))
        .last()
        .unwrap_or(0)
}

fn rank_two_evidence(l: &EvenLattice, cap: u64) -> Result<Vec<Evidence>> {
    let disc = l.det();
    let lift = rank2_lift(l, cap)?;
    let mut ev = vec![Evidence {
        check: "rank2_lift",
        passed: true,
        detail: json!({
            "alpha_prime": format_rational(&lift.alpha),
            "disc_over_4": format_rational(&lift.gamma),
            "certified_range": RANK2_CERTIFIED_RANGE,
        }),
    }];

    let f = f_invariant_series_for(l, CHECK_LEVEL, CHECK_ORDER, cap)?;
    let substituted = f.add(&lift_series(&lift, CHECK_LEVEL, CHECK_ORDER)?)?;
    ev.push(Evidence {
        check: "lift_substitution_integrality",
        passed: substituted.is_integral(),
        detail: json!({
            "level": CHECK_LEVEL,
            "order": CHECK_ORDER,
            "non_integral_indices": substituted.non_integral_indices(),
        }),
    });

    // f + |dis Λ| ν² lies in the span of the weight-4 form modulo integral series.
    let nu = nu_squared_series(CHECK_LEVEL, CHECK_ORDER)?;
    let g4 = eisenstein_qexp(4, CHECK_LEVEL, CHECK_ORDER)?;
    let target = f.add(&nu.scale(&int(disc)))?;
    let identity = divided_congruence_member(&target, std::slice::from_ref(&g4), CHECK_ORDER)?;
    ev.push(Evidence {
        check: "congruence_identity",
        passed: identity.member_up_to_order,
        detail: json!({
            "target": "f + |dis|*nu^2",
            "basis": ["G_4"],
            "combination": identity.combination.iter().map(format_rational).collect::<Vec<_>>(),
            "level": CHECK_LEVEL,
            "order": CHECK_ORDER,
        }),
    });

    // Without the ν² term, f itself is a member exactly when |dis Λ| is even.
    let top = top_form_series(2, CHECK_LEVEL, CHECK_ORDER)?;
    let bare = divided_congruence_member(&f, &[top], CHECK_ORDER)?;
    ev.push(Evidence {
        check: "f_modulo_top_form",
        passed: bare.member_up_to_order == (disc % 2 == 0),
        detail: json!({
            "member_up_to_order": bare.member_up_to_order,
            "expected_member": disc % 2 == 0,
            "level": CHECK_LEVEL,
            "order": CHECK_ORDER,
        }),
    });
    Ok(ev)
}

fn higher_rank_evidence(l: &EvenLattice, cap: u64) -> Result<Vec<Evidence>> {
    let d_max = general_lift_range(l, cap);
    let lift = general_lift(l, d_max, cap)?;
    Ok(vec![
        Evidence {
            check: "general_lift",
            passed: lift.admissible(),
            detail: serde_json::to_value(&lift).expect("lift serializes"),
        },
        Evidence {
            check: "collapse_to_top_degree",
            passed: lift.collapse_holds(),
            detail: json!({ "coefficient": format_rational(&lift.collapsed_coefficient()) }),
        },
    ])
}

/// Stable-homotopy verdict for the class attached to `l`, with the checks
/// that back it. A failing check withholds the verdict.
pub fn classify(l: &EvenLattice, cap: u64) -> Result<HomotopyVerdict> {
    let r = l.rank();
    let disc = l.det();
    let (verdict, mut evidence) = match r {
        1 => (
            Verdict::Trivial,
            vec![Evidence {
                check: "rank_one",
                passed: true,
                detail: json!({ "stable_stem": 4, "group": "0" }),
            }],
        ),
        2 => {
            let v = if disc % 2 != 0 {
                Verdict::NontrivialPi6
            } else {
                Verdict::Trivial
            };
            (v, rank_two_evidence(l, cap)?)
        }
        3..=7 => (Verdict::FiltrationGt2HenceTrivial, higher_rank_evidence(l, cap)?),
        _ => (Verdict::FiltrationGt2, higher_rank_evidence(l, cap)?),
    };
    evidence.push(Evidence {
        check: "disc_parity",
        passed: true,
        detail: json!({ "disc": disc, "parity": parity(disc), "disc_over_2": format_rational(&rat(disc, 2)) }),
    });
    require(&evidence)?;
    Ok(HomotopyVerdict {
        rank: r,
        disc,
        disc_parity: parity(disc),
        verdict,
        evidence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::lookup;
    use crate::lattice::DEFAULT_ENUM_CAP as CAP;

    fn verdict(name: &str) -> Verdict {
        classify(&lookup(name).unwrap(), CAP).unwrap().verdict
    }

    #[test]
    fn catalog_verdicts() {
        assert_eq!(verdict("A2"), Verdict::NontrivialPi6);
        assert_eq!(verdict("Q7"), Verdict::NontrivialPi6);
        assert_eq!(verdict("2A1"), Verdict::Trivial);
        assert_eq!(verdict("diag(2,4)"), Verdict::Trivial);
        assert_eq!(verdict("3A1"), Verdict::FiltrationGt2HenceTrivial);
        assert_eq!(verdict("A1"), Verdict::Trivial);
        assert_eq!(verdict("D4"), Verdict::FiltrationGt2HenceTrivial);
    }

    #[test]
    fn e8_reports_filtration_only() {
        let v = classify(&lookup("E8").unwrap(), CAP).unwrap();
        assert_eq!(v.verdict, Verdict::FiltrationGt2);
        assert!(v.evidence.iter().any(|e| e.check == "general_lift"));
    }

    #[test]
    fn nontrivial_carries_passing_checks() {
        let v = classify(&lookup("A2").unwrap(), CAP).unwrap();
        let checks: Vec<_> = v.evidence.iter().map(|e| e.check).collect();
        assert!(checks.contains(&"rank2_lift") && checks.contains(&"lift_substitution_integrality"));
        assert!(v.evidence.iter().all(|e| e.passed));
        assert_eq!(v.disc_parity, "odd");
    }

    #[test]
    fn verdict_depends_on_rank_and_parity() {
        for g in [
            vec![vec![2, 1], vec![1, 6]],   // 11
            vec![vec![4, 1], vec![1, 4]],   // 15
            vec![vec![2, 0], vec![0, 6]],   // 12
            vec![vec![4, 2], vec![2, 4]],   // 12
            vec![vec![6, 3], vec![3, 6]],   // 27
        ] {
            let l = EvenLattice::new(g).unwrap();
            let expected = if l.det() % 2 == 1 {
                Verdict::NontrivialPi6
            } else {
                Verdict::Trivial
            };
            assert_eq!(classify(&l, CAP).unwrap().verdict, expected, "{:?}", l.gram());
        }
    }

    #[test]
    fn serialized_names() {
        assert_eq!(serde_json::to_value(Verdict::NontrivialPi6).unwrap(), json!("NONTRIVIAL_PI6"));
        assert_eq!(
            serde_json::to_value(Verdict::FiltrationGt2HenceTrivial).unwrap(),
            json!("FILTRATION_GT_2_HENCE_TRIVIAL")
        );
        assert_eq!(serde_json::to_value(Verdict::Trivial).unwrap(), json!(Verdict::Trivial.as_str()));
    }
}
