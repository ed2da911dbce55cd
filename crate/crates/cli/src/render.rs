use indicial::adjoint_pairing::{gram_entries, GramForm};
use indicial::numerics::CVector;
use indicial::singular_functions::{LogPowerElement, SingularSpaceBasis};
use serde_json::{json, Value};

fn vector(v: &CVector) -> Value {
    v.iter().map(|z| json!([z.re, z.im])).collect()
}

pub fn element(e: &LogPowerElement) -> Value {
    json!({
        "root": [e.root.re, e.root.im],
        "coeffs": e.coeffs.iter().map(vector).collect::<Vec<_>>(),
        "cutoff": e.cutoff,
    })
}

pub fn bases(bases: &[SingularSpaceBasis]) -> Value {
    bases
        .iter()
        .map(|b| json!({ "root": b.root, "dim": b.dim(), "elements": b.elements.iter().map(element).collect::<Vec<_>>() }))
        .collect()
}

pub fn gram(g: &GramForm, t: Option<f64>) -> Value {
    json!({
        "t": t,
        "basis": g.basis.iter().map(element).collect::<Vec<_>>(),
        "matrix": gram_entries(g.matrix.matrix()),
        "raw_asymmetry": g.raw_asymmetry,
        "signature": g.signature,
        "sig": g.signature.signature(),
    })
}
