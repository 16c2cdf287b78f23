use std::sync::Arc;

use serde_json::{json, Value};

use hochschild::resolution::{GeneratorKind, Resolution};
use hochschild::zoo;
use hochschild::{Cochain, Error, Scalar};

use crate::config::{load, BvArgs, Common, Format, Subject};

fn emit(format: Format, text: String, value: Value) {
    match format {
        Format::Text => print!("{text}"),
        Format::Json => println!("{}", serde_json::to_string_pretty(&value).expect("report serializes")),
    }
}

fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(Scalar::to_json).collect())
}

fn row_text(v: &[Scalar]) -> String {
    v.iter().map(|x| format!("{x:>6}")).collect::<Vec<_>>().join(" ")
}

pub fn info(c: &Common) -> Result<bool, String> {
    let s = load(c)?;
    let b = &s.bundle;
    let frob = b.frobenius.as_ref();
    let order = frob.map(|f| f.nakayama_order(None));
    let gradings: Vec<&String> = b.gradings.keys().collect();
    let automorphisms: Vec<&String> = b.automorphisms.keys().collect();
    let value = json!({
        "algebra": s.name,
        "field": b.alg.field().to_string(),
        "dim": b.alg.dim(),
        "frobenius": frob.is_some(),
        "nakayama_order": order.flatten(),
        "symmetric": frob.map(|f| f.is_symmetric()),
        "gradings": gradings,
        "automorphisms": automorphisms,
        "seed": c.seed,
    });
    let show = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    let text = format!(
        "algebra        {}\nfield          {}\ndim            {}\nfrobenius      {}\nnu order       {}\nsymmetric      {}\ngradings       {}\nautomorphisms  {}\n",
        s.name,
        b.alg.field(),
        b.alg.dim(),
        if frob.is_some() { "yes" } else { "no" },
        show(order.map(|o| o.map_or("infinite".into(), |o| o.to_string()))),
        show(frob.map(|f| if f.is_symmetric() { "yes".into() } else { "no".into() })),
        gradings.iter().map(|g| g.as_str()).collect::<Vec<_>>().join(", "),
        automorphisms.iter().map(|g| g.as_str()).collect::<Vec<_>>().join(", "),
    );
    emit(c.format, text, value);
    Ok(true)
}

/// `Some(dim)`, or `None` when the degree is over budget.
fn dim_or_skip(r: hochschild::Result<usize>) -> Result<Option<usize>, String> {
    match r {
        Ok(d) => Ok(Some(d)),
        Err(Error::BudgetExceeded { .. }) => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

pub fn hh(c: &Common) -> Result<bool, String> {
    let s = load(c)?;
    let engine = s.engine(c.budget);
    let nu = s.bundle.frobenius.as_ref().map(|f| f.nakayama().clone());
    let mut rows = Vec::new();
    let mut text = format!("# {}\ndegree        hh     hh_nu_up\n", s.name);
    let cell = |d: Option<usize>| d.map_or("skipped".to_string(), |d| d.to_string());
    for n in 0..=c.max_degree {
        let full = dim_or_skip(engine.hh_dim(n))?;
        let up = match &nu {
            Some(nu) => Some(dim_or_skip(engine.hh_up_dim(nu, n))?),
            None => None,
        };
        let up_cell = up.map_or("-".to_string(), cell);
        text.push_str(&format!("{n:>6} {:>9} {:>12}\n", cell(full), up_cell));
        rows.push(json!({
            "degree": n,
            "hh": full.map_or(json!("skipped"), |d| json!(d)),
            "hh_nu_up": up.map(|u| u.map_or(json!("skipped"), |d| json!(d))),
        }));
    }
    let value = json!({ "algebra": s.name, "budget": c.budget.to_string(), "seed": c.seed, "rows": rows });
    emit(c.format, text, value);
    Ok(true)
}

fn generator_name(kind: GeneratorKind, s: usize) -> String {
    match kind {
        GeneratorKind::Eps1 => "eps1".into(),
        GeneratorKind::F => format!("f_{s}"),
        GeneratorKind::G => format!("g_{s}"),
        GeneratorKind::H => format!("h_{s}"),
        GeneratorKind::P => format!("p_{s}"),
        GeneratorKind::Chi => format!("chi_{s}"),
        GeneratorKind::Xi => format!("xi_{s}"),
        GeneratorKind::Eps0Path(j) => format!("eps0_path_{j}"),
        GeneratorKind::Eps0Branch(q) => format!("eps0_branch_{q}"),
    }
}

/// Named generators of `R(n, r)` in degree `s`, as ν-invariant cochains.
fn named_generators(s: &Subject, degree: usize) -> Result<Vec<(String, Cochain)>, String> {
    let Some(d) = &s.dnr else { return Ok(Vec::new()) };
    let res = Arc::new(Resolution::new(d.clone()));
    let ch = d.alg().field().characteristic() as usize;
    let divide = ch == 0 || d.r % ch != 0;
    let mut kinds = vec![
        GeneratorKind::Eps1,
        GeneratorKind::F,
        GeneratorKind::G,
        GeneratorKind::H,
        GeneratorKind::P,
        GeneratorKind::Chi,
        GeneratorKind::Xi,
    ];
    kinds.extend((1..=d.n - 2).map(GeneratorKind::Eps0Path));
    kinds.extend([d.n - 1, d.n].map(GeneratorKind::Eps0Branch));
    let mut out = Vec::new();
    for kind in kinds {
        let spec = match res.generator(kind, degree) {
            Ok(spec) => spec,
            Err(Error::GeneratorRefused(_)) => continue,
            Err(e) => return Err(e.to_string()),
        };
        let f = res.nu_conjugate_average(&spec, divide).map_err(|e| e.to_string())?;
        out.push((generator_name(kind, degree), f));
    }
    Ok(out)
}

pub fn bv(a: &BvArgs) -> Result<bool, String> {
    let c = &a.common;
    let s = load(c)?;
    let frob = s.bundle.frobenius.as_ref().ok_or("the algebra carries no Frobenius form; Δ is undefined")?;
    let engine = s.engine(c.budget);
    let n = a.degree;
    let m = engine.bv_matrix(frob, n).map_err(|e| e.to_string())?;
    let src = engine.hh_up_dim(frob.nakayama(), n).map_err(|e| e.to_string())?;
    let tgt = m.len();
    let target = if n == 0 { "0".to_string() } else { format!("HH^{}(R)^{{ν↑}} (dim {tgt})", n - 1) };
    let mut text = format!("# {}\nΔ: HH^{n}(R)^{{ν↑}} (dim {src}) → {target}\n", s.name);
    for row in &m {
        text.push_str(&row_text(row));
        text.push('\n');
    }
    let mut notes = Vec::new();
    let up = |k| engine.hh_up(frob.nakayama(), k).map_err(|e: Error| e.to_string());
    for (name, f) in named_generators(&s, n)? {
        let class = up(n)?.class_of(&f).map_err(|e| format!("{name}: {e}"))?;
        let image = engine.induced_bv_on_class(frob, n, &class).map_err(|e| e.to_string())?;
        text.push_str(&format!("{name}: class [{}], Δ → [{}]\n", row_text(&class).trim(), row_text(&image).trim()));
        notes.push(json!({ "generator": name, "class": scalars(&class), "delta": scalars(&image) }));
    }
    if n == 1 && s.dnr.is_some() {
        let one = Cochain::from_element(s.bundle.alg.clone(), s.bundle.alg.unit().clone());
        let class = up(0)?.class_of(&one).map_err(|e| e.to_string())?;
        text.push_str(&format!("1: class [{}] in degree 0\n", row_text(&class).trim()));
        notes.push(json!({ "generator": "1", "class": scalars(&class) }));
    }
    let value = json!({
        "algebra": s.name,
        "degree": n,
        "source_dim": src,
        "target_dim": tgt,
        "matrix": m.iter().map(|r| scalars(r)).collect::<Vec<_>>(),
        "generators": notes,
        "seed": c.seed,
    });
    emit(c.format, text, value);
    Ok(true)
}

pub fn export(c: &Common) -> Result<bool, String> {
    let s = load(c)?;
    let v = zoo::to_json(&s.bundle);
    println!("{}", serde_json::to_string_pretty(&v).expect("algebra serializes"));
    Ok(true)
}
