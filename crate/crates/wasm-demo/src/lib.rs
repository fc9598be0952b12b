//! wasm-bindgen exports for the static demo page in `www/`.

use num_traits::Signed;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use seaweed_core::chevalley::fixtures;
use seaweed_core::cochain::ComplexContext;
use seaweed_core::deform::{deform, invariant_profile, jacobi_in_t, InvariantProfile, JacobiInT};
use seaweed_core::exactlin::{format_rational, int, parse_rational, SparseVec};
use seaweed_core::report::{build_report, info, Info, Options, Target};
use seaweed_core::seaweed::{render_split_dynkin, SeaweedSpec};

/// Largest dimension of s the page will compute cohomology for.
pub const MAX_DEMO_DIM: usize = 12;

#[derive(Serialize)]
struct InfoOut {
    spec: String,
    diagram: String,
    info: Info,
}

fn spec(type_label: &str, rank: usize, pi1: &str, pi2: &str) -> Result<SeaweedSpec, String> {
    SeaweedSpec::parse(type_label, rank, pi1, pi2).map_err(|e| e.to_string())
}

pub fn info_json(type_label: &str, rank: usize, pi1: &str, pi2: &str) -> Result<String, String> {
    let spec = spec(type_label, rank, pi1, pi2)?;
    let target = Target::canonical(&spec).map_err(|e| e.to_string())?;
    let out = InfoOut {
        spec: spec.to_string(),
        diagram: render_split_dynkin(&spec),
        info: info(&target),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

pub fn cohomology_json(type_label: &str, rank: usize, pi1: &str, pi2: &str, max_degree: usize) -> Result<String, String> {
    let spec = spec(type_label, rank, pi1, pi2)?;
    let target = Target::canonical(&spec).map_err(|e| e.to_string())?;
    let dim = info(&target).dim_s;
    if dim > MAX_DEMO_DIM {
        return Err(format!("dim s = {dim} is above the demo limit of {MAX_DEMO_DIM}"));
    }
    let opts = Options {
        max_degree: Some(max_degree.min(dim)),
        allow_large: true,
        certificates: true,
        max_invariant_degree: Some(max_degree),
    };
    let r = build_report(&target, &opts).map_err(|e| e.to_string())?;
    Ok(serde_json::to_string(&r).expect("serializes"))
}

#[derive(Serialize)]
struct DeformationOut {
    t: String,
    labels: Vec<String>,
    /// `[e_i, e_j]_t` for i < j, rendered.
    brackets: Vec<(String, String, String)>,
    jacobi: JacobiInT,
    is_lie: bool,
    base: InvariantProfile,
    deformed: InvariantProfile,
}

fn render(labels: &[String], v: &SparseVec) -> String {
    if v.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (i, c)) in v.iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        match (k, sign) {
            (0, "+") => {}
            (0, _) => out.push('-'),
            _ => out.push_str(&format!(" {sign} ")),
        }
        out.push_str(&format!("{}·{}", format_rational(&c.abs()), labels[i]));
    }
    out
}

/// The G2 seaweed deformed along `f(e13, e14) = 2e13 + 3e14` at parameter `t`.
pub fn g2_deformation_json(t: &str) -> Result<String, String> {
    let t = parse_rational(t).map_err(|e| e.to_string())?;
    let s = fixtures::g2_seaweed();
    let arc = std::sync::Arc::new(s.clone());
    let ctx = ComplexContext::from_indices(&arc, &[0, 1, 2], &[0, 1, 2]).map_err(|e| e.to_string())?;
    let f2 = ctx.cochain_from(2, [(vec![1, 2], SparseVec::from_pairs([(1, int(2)), (2, int(3))]))]);
    let d = deform(&s, &f2, &t).map_err(|e| e.to_string())?;
    let labels = s.labels().to_vec();
    let mut brackets = Vec::new();
    for i in 0..s.dim() {
        for j in i + 1..s.dim() {
            brackets.push((labels[i].clone(), labels[j].clone(), render(&labels, d.algebra.bracket(i, j))));
        }
    }
    let out = DeformationOut {
        t: format_rational(&t),
        labels: labels.clone(),
        brackets,
        jacobi: jacobi_in_t(&s, &f2).map_err(|e| e.to_string())?,
        is_lie: d.algebra.check_jacobi().is_ok(),
        base: invariant_profile(&s),
        deformed: invariant_profile(&d.algebra),
    };
    Ok(serde_json::to_string(&out).expect("serializes"))
}

#[wasm_bindgen]
pub fn seaweed_info(type_label: &str, rank: usize, pi1: &str, pi2: &str) -> Result<String, JsValue> {
    info_json(type_label, rank, pi1, pi2).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn seaweed_cohomology(type_label: &str, rank: usize, pi1: &str, pi2: &str, max_degree: usize) -> Result<String, JsValue> {
    cohomology_json(type_label, rank, pi1, pi2, max_degree).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn g2_deformation(t: &str) -> Result<String, JsValue> {
    g2_deformation_json(t).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn info_for_g2() {
        let v: serde_json::Value = serde_json::from_str(&info_json("G", 2, "1", "").unwrap()).unwrap();
        assert_eq!(v["info"]["dim_center"], 1);
        assert!(v["diagram"].as_str().unwrap().starts_with("pi1"));
        assert!(info_json("G", 3, "", "").is_err());
    }

    #[test]
    fn cohomology_for_a2() {
        let v: serde_json::Value = serde_json::from_str(&cohomology_json("A", 2, "", "1,2", 5).unwrap()).unwrap();
        assert!(v["dims"].as_array().unwrap().iter().all(|d| d["h"] == 0));
        assert_eq!(v["certificates"][1]["eigenvalues"][0], "2");
        assert!(cohomology_json("B", 3, "1,2,3", "1,2,3", 2).is_err());
    }

    #[test]
    fn deformation() {
        let v: serde_json::Value = serde_json::from_str(&g2_deformation_json("5/3").unwrap()).unwrap();
        assert_eq!(v["brackets"][2][2], "10/3·e13 + 5·e14");
        let v: serde_json::Value = serde_json::from_str(&g2_deformation_json("-2").unwrap()).unwrap();
        assert_eq!(v["brackets"][2][2], "-4·e13 - 6·e14");
        assert_eq!(v["jacobi"]["quadratic_term_zero"], true);
        assert_eq!(v["deformed"]["center_dim"], 0);
        assert!(g2_deformation_json("x").is_err());
    }
}
