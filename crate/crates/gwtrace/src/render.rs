//! Text and JSON renderings of core results.

use std::fmt::Write;

use serde_json::{json, Value};

use gwtrace_core::smp::SplittingCertificate;
use gwtrace_core::transfer::{ProjectorReport, TransferFormula};
use gwtrace_core::{GwElement, Invariants};

/// A reduced word such as `s1s2`; the identity is `e`.
pub fn word(w: &[u32]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter().fold(String::new(), |mut s, i| {
        let _ = write!(s, "s{i}");
        s
    })
}

pub fn gw_json(x: &GwElement) -> Value {
    json!({
        "element": x.to_string(),
        "rank": x.rank(),
        "terms": x
            .terms()
            .map(|(c, m)| json!({ "class": c.to_string(), "multiplicity": m }))
            .collect::<Vec<_>>(),
    })
}

pub fn invariants_text(inv: &Invariants) -> String {
    let mut s = format!("rank: {}\ndiscriminant: {}", inv.rank, inv.discriminant);
    if let Some(sig) = inv.signature {
        let _ = write!(s, "\nsignature: {sig}");
    }
    if let Some(h) = &inv.hasse {
        let list: Vec<String> = h.iter().map(|(p, e)| format!("{p}:{e}")).collect();
        let _ = write!(s, "\nhasse: {{{}}}", list.join(","));
    }
    s
}

pub fn invariants_json(inv: &Invariants) -> Value {
    json!({
        "rank": inv.rank,
        "discriminant": inv.discriminant.to_string(),
        "signature": inv.signature,
        "hasse": inv.hasse.as_ref().map(|h| {
            h.iter().map(|(p, e)| (p.to_string(), json!(e))).collect::<serde_json::Map<_, _>>()
        }),
    })
}

pub fn formula_json(f: &TransferFormula) -> Value {
    json!({
        "type": f.cartan_type.to_string(),
        "term_count": f.terms.len(),
        "terms": f
            .terms
            .iter()
            .map(|t| json!({
                "conjugator": word(&t.conjugator),
                "length": t.length,
                "restriction": t.restriction.as_ref().map(|r| r.levi.to_string()),
                "coefficient": t.coefficient,
                "text": t.to_string(),
            }))
            .collect::<Vec<_>>(),
    })
}

pub fn report_json(r: &ProjectorReport) -> Value {
    json!({
        "type": r.cartan_type.to_string(),
        "degree_cap": r.degree_cap,
        "group_order": r.group_order,
        "projector_idempotent": r.projector_idempotent,
        "image_dims": r.image_dims,
        "molien_dims": r.molien_dims,
        "matches": r.matches,
        "invariants_fixed": r.invariants_fixed,
        "image_fixed": r.image_fixed,
        "holds": r.holds(),
    })
}

pub fn certificate_json(c: &SplittingCertificate) -> Value {
    json!({
        "n": c.n,
        "entries": c
            .entries
            .iter()
            .map(|row| row.iter().map(ToString::to_string).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
        "triangular": c.triangular,
        "diagonal_is_projection": c.diagonal_is_projection,
        "holds": c.holds(),
    })
}
