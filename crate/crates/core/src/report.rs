use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::classify::{classify, general_lift_range};
use crate::cyclo::{
    divided_congruence_member, discriminant_sums, eisenstein_qexp, f_invariant_series, lift_series,
    nu_squared_series, recommended_order, QSeries,
};
use crate::error::{Error, Result};
use crate::eta::{discriminant_sum, eta_adiabatic, general_lift, rank2_lift, PolynomialLift};
use crate::lattice::{discriminant_group, gauss_milgram_invariants, EvenLattice};
use crate::oracle;
use crate::rational::{format_rational, int, QmodZ};
use crate::spectral::{base_eta_reduced, base_spectrum, gram_eigenvalues, kernel_dimension, vertical_spectrum};

/// Largest discriminant group listed class by class in `info`.
pub const INFO_LISTING_LIMIT: u64 = 1024;

pub fn render(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn lattice_block(l: &EvenLattice) -> Value {
    json!({ "gram": l.gram(), "rank": l.rank(), "disc": l.det() })
}

fn sums_block(sums: &BTreeMap<i64, QmodZ>) -> Value {
    Value::Object(sums.iter().map(|(d, s)| (d.to_string(), json!(s.to_string()))).collect())
}

/// Rank-2 closed form when `r = 2`, otherwise the fitted lift when the cap
/// allows at least six twists; `None` when it does not.
pub fn lift_for(l: &EvenLattice, cap: u64) -> Result<Option<PolynomialLift>> {
    if l.rank() == 2 {
        return rank2_lift(l, cap).map(Some);
    }
    let d_max = general_lift_range(l, cap);
    if d_max < 6 {
        return Ok(None);
    }
    general_lift(l, d_max, cap).map(Some)
}

fn lift_block(l: &EvenLattice, lift: &PolynomialLift) -> Value {
    let mut v = serde_json::to_value(lift).expect("lift serializes");
    if l.rank() == 2 {
        v["alpha_prime"] = json!(format_rational(&lift.alpha));
        v["disc_over_4"] = json!(format_rational(&lift.gamma));
    }
    v
}

pub fn info_report(l: &EvenLattice, d: i64, cap: u64) -> Result<Value> {
    let group = discriminant_group(l, d, cap)?;
    let spectrum = gram_eigenvalues(l)?;
    let (abs_sq, phase) = gauss_milgram_invariants(l, cap)?;
    let mut disc_group = json!({
        "twist": d,
        "order": group.order,
        "invariant_factors": group.invariant_factors,
    });
    if group.order <= INFO_LISTING_LIMIT {
        disc_group["representatives"] = json!(group.representatives_json());
        disc_group["qbar"] = json!(group.qbar.iter().map(|q| q.to_string()).collect::<Vec<_>>());
    }
    Ok(json!({
        "command": "info",
        "lattice": lattice_block(l),
        "trace": l.trace(),
        "smith_diagonal": l.smith().diag,
        "gram_eigenvalues": spectrum.eigenvalues,
        "discriminant_group": disc_group,
        "gauss_milgram": { "abs_squared": abs_sq, "phase_turns": phase, "expected_phase_turns": format_rational(&crate::rational::rat(l.rank() as i64 % 8, 8)) },
    }))
}

pub fn eta_report(l: &EvenLattice, d: i64, with_oracle: bool, cap: u64) -> Result<Value> {
    let eta = eta_adiabatic(l, d, cap)?;
    let s_d = discriminant_sum(l, d, cap)?;
    let lift = lift_for(l, cap)?;
    let range = lift.as_ref().map_or(0, |x| x.certified_range);
    let sums = discriminant_sums(l, range, cap)?;
    let mut report = json!({
        "command": "eta",
        "lattice": lattice_block(l),
        "twist": d,
        "eta": eta.to_string(),
        "discriminant_sum": s_d.to_string(),
        "S": sums_block(&sums),
        "lift": lift.as_ref().map(|x| lift_block(l, x)),
    });
    if with_oracle {
        let o_eta = oracle::eta(l, d, cap)?;
        if o_eta != eta {
            return Err(Error::OracleMismatch(format!("eta at d = {d}: closed {eta}, oracle {o_eta}")));
        }
        let mut o_sums = BTreeMap::new();
        for (&k, s) in &sums {
            let o = oracle::discriminant_sum(l, k, cap)?;
            if &o != s {
                return Err(Error::OracleMismatch(format!("S({k}): closed {s}, oracle {o}")));
            }
            o_sums.insert(k, o);
        }
        report["oracle"] = json!({ "eta": o_eta.to_string(), "S": sums_block(&o_sums), "agrees": true });
    }
    Ok(report)
}

pub fn spectrum_report(l: &EvenLattice, d: i64, n_cap: u32, k_range: (i64, i64), cap: u64) -> Result<Value> {
    let vertical = vertical_spectrum(l, d, n_cap, cap)?;
    let base = base_spectrum(l, d, k_range.0, k_range.1, cap)?;
    let reduced = base_eta_reduced(l, d, cap)?;
    let eta = eta_adiabatic(l, d, cap)?;
    if reduced != eta {
        return Err(Error::InternalMismatch(format!("base eta {reduced} differs from adiabatic eta {eta}")));
    }
    Ok(json!({
        "command": "spectrum",
        "lattice": lattice_block(l),
        "twist": d,
        "levels": n_cap,
        "k_range": [k_range.0, k_range.1],
        "kernel_dimension": kernel_dimension(l, d, cap)?,
        "base_eta_reduced": reduced.to_string(),
        "vertical": vertical,
        "base": base,
    }))
}

fn f_series(l: &EvenLattice, level: u32, order: usize, with_oracle: bool, cap: u64) -> Result<QSeries> {
    let sums = discriminant_sums(l, order as i64, cap)?;
    if with_oracle {
        for (&d, s) in &sums {
            let o = oracle::discriminant_sum(l, d, cap)?;
            if &o != s {
                return Err(Error::OracleMismatch(format!("S({d}): closed {s}, oracle {o}")));
            }
        }
    }
    f_invariant_series(l, &sums, level, order)
}

pub fn f_invariant_report(l: &EvenLattice, level: u32, order: usize, with_oracle: bool, cap: u64) -> Result<Value> {
    let f = f_series(l, level, order, with_oracle, cap)?;
    let mut report = json!({
        "command": "f-invariant",
        "lattice": lattice_block(l),
        "series": f.to_json(),
    });
    if l.rank() == 2 {
        let lift = rank2_lift(l, cap)?;
        let substituted = f.add(&lift_series(&lift, level, order)?)?;
        report["lift"] = lift_block(l, &lift);
        report["lift_substituted_integral"] = json!(substituted.is_integral());
    }
    if with_oracle {
        report["oracle"] = json!({ "agrees": true });
    }
    Ok(report)
}

fn congruence_check(name: &str, target: &QSeries, basis_names: &[String], basis: &[QSeries], order: usize) -> Result<Value> {
    let v = divided_congruence_member(target, basis, order)?;
    Ok(json!({
        "target": name,
        "basis": basis_names,
        "member_up_to_order": v.member_up_to_order,
        "combination": v.combination.iter().map(format_rational).collect::<Vec<_>>(),
        "constant_constrained": v.constant_constrained,
        "residual": v.residual.to_json(),
    }))
}

pub fn congruence_report(l: &EvenLattice, level: u32, order: usize, cap: u64) -> Result<Value> {
    let r = l.rank() as u32;
    let f = f_series(l, level, order, false, cap)?;
    let g = eisenstein_qexp(r + 2, level, order)?;
    let g_name = vec![format!("G_{}", r + 2)];
    let mut checks = vec![congruence_check("f", &f, &g_name, std::slice::from_ref(&g), order)?];
    if r == 2 {
        let target = f.add(&nu_squared_series(level, order)?.scale(&int(l.det())))?;
        checks.push(congruence_check("f + |dis|*nu^2", &target, &g_name, std::slice::from_ref(&g), order)?);
    }
    let first = &checks[0];
    let caveat = divided_congruence_member(&QSeries::zero(f.field(), order), &[], order)?.caveat;
    Ok(json!({
        "command": "congruence",
        "lattice": lattice_block(l),
        "level": level,
        "order": order,
        "recommended_order": recommended_order(r + 2, level),
        "member_up_to_order": first["member_up_to_order"].clone(),
        "checks": checks,
        "caveat": caveat,
    }))
}

pub fn classify_report(l: &EvenLattice, cap: u64) -> Result<Value> {
    let v = classify(l, cap)?;
    let mut report = serde_json::to_value(&v).expect("verdict serializes");
    report["command"] = json!("classify");
    report["lattice"] = lattice_block(l);
    Ok(report)
}
