//! Job files and the JSON reports they produce.
//!
//! A job names a ring, one module and a command:
//!
//! ```json
//! {
//!   "ring": {"field": "Q", "vars": ["x", "y"]},
//!   "module": {"embedded": {"ambient_rank": 2, "columns": [["x", "0"], ["y", "0"], ["0", "1"]]}},
//!   "command": "det0"
//! }
//! ```
//!
//! Presented modules are given as `{"presented": {"n": 3, "matrix": [...]}}`
//! with the matrix row-major, optionally with a `witness` map to a free module.

use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::bourbaki::{generic_bourbaki, verify_bourbaki};
use crate::divisors::{det0, find_psi, is_free_local, nonfree_locus_ideal, norm_representative, zak_report};
use crate::error::{Error, Result};
use crate::groebner::{height_and_grade, render_generators, Ideal};
use crate::presmod::{
    fitting_ideal, image_in_free, mu_local, presentation_of_embedded, theta_image, EmbeddedModule, PresentedModule,
};
use crate::rees::{analytic_spread, classify_module, fiber_cone, reduction_number, rees_presentation, DEFAULT_RMAX};
use crate::ring::{parse_poly, Field, FieldDescriptor, Fp, MonomialOrder, PolyMatrix, Rational, Ring, RingDescriptor};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Fitting,
    Det0,
    Norm,
    Psi,
    Bourbaki,
    Rees,
    Fiber,
    Spread,
    Reduction,
    Classify,
    Zak,
    NonfreeLocus,
}

impl Command {
    pub const ALL: [Command; 12] = [
        Command::Fitting,
        Command::Det0,
        Command::Norm,
        Command::Psi,
        Command::Bourbaki,
        Command::Rees,
        Command::Fiber,
        Command::Spread,
        Command::Reduction,
        Command::Classify,
        Command::Zak,
        Command::NonfreeLocus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Fitting => "fitting",
            Command::Det0 => "det0",
            Command::Norm => "norm",
            Command::Psi => "psi",
            Command::Bourbaki => "bourbaki",
            Command::Rees => "rees",
            Command::Fiber => "fiber",
            Command::Spread => "spread",
            Command::Reduction => "reduction",
            Command::Classify => "classify",
            Command::Zak => "zak",
            Command::NonfreeLocus => "nonfree-locus",
        }
    }

    /// Whether the answer is read in the local ring at the origin.
    fn is_local(self) -> bool {
        !matches!(self, Command::Rees | Command::Fitting | Command::Det0 | Command::Psi)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleSpec {
    /// Generators of a submodule of `S^ambient_rank`, one column each.
    Embedded { ambient_rank: usize, columns: Vec<Vec<String>> },
    /// `coker(matrix)` with `matrix` of size `n × m`, row-major.
    Presented {
        n: usize,
        matrix: Vec<Vec<String>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        witness: Option<Vec<Vec<String>>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_rmax")]
    pub rmax: usize,
    /// Overrides the order of the ring descriptor.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<MonomialOrder>,
    /// Fitting index for `fitting`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<usize>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_rmax() -> usize {
    DEFAULT_RMAX
}

impl Default for JobOptions {
    fn default() -> Self {
        JobOptions { seed: DEFAULT_SEED, rmax: DEFAULT_RMAX, order: None, index: None }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub ring: RingDescriptor,
    pub module: ModuleSpec,
    /// Column indices of a candidate reduction `U ⊆ E`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduction: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub options: JobOptions,
}

impl JobSpec {
    pub fn from_json(src: &str) -> Result<Self> {
        serde_json::from_str(src).map_err(|e| Error::Input(e.to_string()))
    }

    /// The ring with the order override applied.
    pub fn effective_ring(&self) -> RingDescriptor {
        let mut d = self.ring.clone();
        if let Some(o) = self.options.order {
            d.order = o;
        }
        d
    }
}

/// A computation generic over the coefficient field, dispatched on a
/// runtime [`FieldDescriptor`].
pub trait FieldVisitor {
    type Output;
    fn visit<F: Field>(self) -> Self::Output;
}

pub fn with_field<V: FieldVisitor>(field: &FieldDescriptor, v: V) -> Result<V::Output> {
    Ok(match field {
        FieldDescriptor::Rationals => v.visit::<Rational>(),
        FieldDescriptor::Prime(32003) => v.visit::<Fp<32003>>(),
        FieldDescriptor::Prime(65521) => v.visit::<Fp<65521>>(),
        FieldDescriptor::Prime(1000003) => v.visit::<Fp<1000003>>(),
        FieldDescriptor::Prime(2147483647) => v.visit::<Fp<2147483647>>(),
        FieldDescriptor::Prime(p) => {
            return Err(Error::Input(format!("unsupported prime {p}; supported: {:?}", crate::ring::SUPPORTED_PRIMES)))
        }
    })
}

/// A parsed module payload.
#[derive(Clone, Debug)]
pub enum Module<F: Field> {
    Embedded(EmbeddedModule<F>),
    Presented(PresentedModule<F>),
}

impl<F: Field> Module<F> {
    pub fn ring(&self) -> &Arc<Ring> {
        match self {
            Module::Embedded(e) => e.ring(),
            Module::Presented(p) => p.ring(),
        }
    }

    pub fn embedded(&self) -> Result<EmbeddedModule<F>> {
        match self {
            Module::Embedded(e) => Ok(e.clone()),
            Module::Presented(p) => image_in_free(p),
        }
    }

    pub fn presented(&self) -> Result<PresentedModule<F>> {
        match self {
            Module::Embedded(e) => presentation_of_embedded(e),
            Module::Presented(p) => Ok(p.clone()),
        }
    }

    fn is_homogeneous(&self) -> bool {
        let m = match self {
            Module::Embedded(e) => e.matrix(),
            Module::Presented(p) => p.presentation(),
        };
        (0..m.rows()).all(|i| (0..m.cols()).all(|j| m.get(i, j).is_homogeneous()))
    }
}

fn parse_rows<F: Field>(
    ring: &Arc<Ring>,
    rows: &[Vec<String>],
    what: &str,
) -> Result<Vec<Vec<crate::ring::Polynomial<F>>>> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, s)| parse_poly(s, ring).map_err(|e| Error::Input(format!("{what}[{i}][{j}] {s:?}: {e}"))))
                .collect()
        })
        .collect()
}

fn rectangular<T>(rows: &[Vec<T>], n: usize, what: &str) -> Result<usize> {
    if rows.len() != n {
        return Err(Error::Input(format!("{what} has {} rows, expected {n}", rows.len())));
    }
    let width = rows.first().map_or(0, Vec::len);
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::Input(format!("{what} row {i} has {} entries, expected {width}", rows[i].len())));
    }
    Ok(width)
}

pub fn load_module<F: Field>(spec: &ModuleSpec, ring: &Arc<Ring>) -> Result<Module<F>> {
    match spec {
        ModuleSpec::Embedded { ambient_rank, columns } => {
            if let Some(j) = columns.iter().position(|c| c.len() != *ambient_rank) {
                return Err(Error::Input(format!(
                    "columns[{j}] has {} entries, expected {ambient_rank}",
                    columns[j].len()
                )));
            }
            let cols = parse_rows(ring, columns, "columns")?;
            Ok(Module::Embedded(EmbeddedModule::new(PolyMatrix::from_columns(ring, *ambient_rank, cols))))
        }
        ModuleSpec::Presented { n, matrix, witness } => {
            let m = rectangular(matrix, *n, "matrix")?;
            let phi = PolyMatrix::from_columns(ring, *n, transpose(parse_rows(ring, matrix, "matrix")?, m));
            match witness {
                None => Ok(Module::Presented(PresentedModule::new(phi))),
                Some(w) => {
                    let rows = w.len();
                    if rows > 0 {
                        rectangular(w, rows, "witness")?;
                        if w[0].len() != *n {
                            return Err(Error::Input(format!("witness has {} columns, expected {n}", w[0].len())));
                        }
                    }
                    let wm = PolyMatrix::from_columns(ring, rows, transpose(parse_rows(ring, w, "witness")?, *n));
                    Ok(Module::Presented(PresentedModule::with_witness(phi, wm).map_err(|e| match e {
                        Error::Precondition(msg) => Error::Input(msg),
                        other => other,
                    })?))
                }
            }
        }
    }
}

fn transpose<T: Clone>(rows: Vec<Vec<T>>, width: usize) -> Vec<Vec<T>> {
    (0..width).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect()
}

/// Reduced Gröbner basis in canonical printing.
pub fn ideal_value<F: Field>(i: &Ideal<F>) -> Result<Value> {
    Ok(json!(i.to_strings()?))
}

fn height_grade_value<F: Field>(i: &Ideal<F>) -> Result<(Value, Value)> {
    if i.is_zero() || i.is_unit()? {
        return Ok((Value::Null, Value::Null));
    }
    let (h, g) = height_and_grade(i)?;
    Ok((json!(h), json!(g)))
}

/// `μ` of an ideal, as the number of minimal generators at the origin.
pub fn ideal_mu<F: Field>(i: &Ideal<F>) -> Result<usize> {
    let gens = i.groebner_basis()?.to_vec();
    if gens.is_empty() {
        return Ok(0);
    }
    let e = EmbeddedModule::new(PolyMatrix::from_rows(i.ring(), vec![gens]));
    Ok(mu_local(&presentation_of_embedded(&e)?))
}

fn insert_all(map: &mut Map<String, Value>, v: Value) {
    if let Value::Object(o) = v {
        map.extend(o);
    }
}

/// Runs a job. The command comes from the job unless `command` is given.
pub fn run(job: &JobSpec) -> Result<Value> {
    struct Run<'a>(&'a JobSpec);
    impl FieldVisitor for Run<'_> {
        type Output = Result<Value>;
        fn visit<F: Field>(self) -> Result<Value> {
            run_in::<F>(self.0)
        }
    }
    with_field(&job.ring.field, Run(job))?
}

fn run_in<F: Field>(job: &JobSpec) -> Result<Value> {
    let command = job.command.ok_or_else(|| Error::Input("job names no command".into()))?;
    let desc = job.effective_ring();
    let ring = desc.ring()?;
    let module = load_module::<F>(&job.module, &ring)?;
    let seed = job.options.seed;
    let mut out = Map::new();
    out.insert("command".into(), json!(command.name()));
    out.insert("ring".into(), serde_json::to_value(&desc).expect("descriptor serializes"));
    out.insert("seed".into(), json!(seed));
    if command.is_local() && !module.is_homogeneous() {
        out.insert(
            "warnings".into(),
            json!(["input is not homogeneous; local invariants are read at the origin only"]),
        );
    }
    match command {
        Command::Fitting => {
            let i = job.options.index.ok_or_else(|| Error::Input("fitting needs options.index".into()))?;
            let pres = module.presented()?;
            out.insert("index".into(), json!(i));
            out.insert("presentation".into(), json!(pres.presentation().to_strings()));
            out.insert("ideal".into(), ideal_value(&fitting_ideal(&pres, i)?)?);
        }
        Command::Det0 => {
            let d = det0(&module.embedded()?)?;
            let (h, g) = height_grade_value(&d)?;
            out.insert("ideal".into(), ideal_value(&d)?);
            out.insert("height".into(), h);
            out.insert("grade".into(), g);
        }
        Command::Norm => {
            let pres = module.presented()?;
            let cert = norm_representative(&pres, seed)?;
            out.insert("rho".into(), json!(cert.rho.to_strings()));
            out.insert("columns".into(), json!(cert.columns));
            out.insert("e1_presentation".into(), json!(cert.e1.presentation().to_strings()));
            out.insert("ideal".into(), ideal_value(&cert.ideal)?);
        }
        Command::Psi => {
            let pres = module.presented()?;
            let excluded = pres.rank()?.saturating_sub(1);
            let (psi, cols) = find_psi(&pres, excluded)?;
            out.insert("excluded_rows".into(), json!(excluded));
            out.insert("psi".into(), json!(psi.to_strings()));
            out.insert("columns".into(), json!(cols));
            out.insert("ideal".into(), ideal_value(&theta_image(&psi)?)?);
        }
        Command::Bourbaki => {
            let e = module.embedded()?;
            let b = generic_bourbaki(&e, job.reduction.as_deref(), seed)?;
            let v = verify_bourbaki(&b, &e)?;
            let (h, g) = height_grade_value(&b.ideal)?;
            let coeffs: Vec<Vec<String>> =
                b.coefficients.iter().map(|r| r.iter().map(|c| c.to_string()).collect()).collect();
            let generic: Vec<Vec<String>> =
                b.generic_elements().iter().map(|c| c.iter().map(|p| p.to_string()).collect()).collect();
            out.insert("accepted_seed".into(), json!(b.seed));
            out.insert("coefficients".into(), json!(coeffs));
            out.insert("u_columns".into(), json!(b.u_columns));
            out.insert("generic_elements".into(), json!(generic));
            out.insert("chosen".into(), json!(b.chosen));
            out.insert("phi".into(), json!(b.phi.to_strings()));
            out.insert("psi".into(), json!(b.psi.to_strings()));
            out.insert("psi_columns".into(), json!(b.psi_columns));
            out.insert("ideal".into(), ideal_value(&b.ideal)?);
            out.insert("ideal_mu".into(), json!(ideal_mu(&b.ideal)?));
            out.insert("ideal_height".into(), h);
            out.insert("ideal_grade".into(), g);
            out.insert("e_bar_presentation".into(), json!(b.e_bar.presentation().to_strings()));
            out.insert("certificates".into(), serde_json::to_value(&b.certificates).expect("serializes"));
            let mut ver = serde_json::to_value(&v).expect("serializes");
            ver["passed"] = json!(v.passed());
            out.insert("verification".into(), ver);
        }
        Command::Rees => {
            let rp = rees_presentation(&module.embedded()?)?;
            out.insert("vars".into(), json!(rp.ring.vars()));
            out.insert("defining_ideal".into(), ideal_value(&rp.defining_ideal)?);
        }
        Command::Fiber => {
            let fc = fiber_cone(&module.embedded()?)?;
            out.insert("vars".into(), json!(fc.ring.vars()));
            out.insert("ideal".into(), ideal_value(&fc.ideal)?);
            out.insert("dimension".into(), json!(fc.dimension));
        }
        Command::Spread => {
            out.insert("analytic_spread".into(), json!(analytic_spread(&module.embedded()?)?));
        }
        Command::Reduction => {
            let u = job.reduction.as_ref().ok_or_else(|| Error::Input("reduction needs a column subset".into()))?;
            let outcome = reduction_number(u, &module.embedded()?, job.options.rmax)?;
            out.insert("u".into(), json!(u));
            out.insert("rmax".into(), json!(job.options.rmax));
            out.insert("outcome".into(), serde_json::to_value(outcome).expect("serializes"));
        }
        Command::Classify => {
            insert_all(&mut out, serde_json::to_value(classify_module(&module.embedded()?)?).expect("serializes"));
        }
        Command::Zak => {
            let z = zak_report(&module.embedded()?, seed)?;
            insert_all(&mut out, serde_json::to_value(&z).expect("serializes"));
            out.insert("passed".into(), json!(z.passed()));
        }
        Command::NonfreeLocus => {
            let e = module.embedded()?;
            out.insert("ideal".into(), ideal_value(&nonfree_locus_ideal(&e)?)?);
            out.insert("free_local".into(), json!(is_free_local(&e)?));
        }
    }
    Ok(Value::Object(out))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_json(report: &Value) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("values serialize");
    s.push('\n');
    s
}

const IDEAL_KEYS: [&str; 3] = ["ideal", "defining_ideal", "numerator"];

/// Plain-text rendering of a report: one `key: value` line per field,
/// ideals as `(g₁, g₂, …)`, matrices one row per line.
pub fn format_report(report: &Value) -> String {
    let mut out = String::new();
    if let Value::Object(map) = report {
        for (k, v) in map {
            render(&mut out, k, v, 0);
        }
    }
    out
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if key == "ring" && m.contains_key("vars") => {
            let field = match &m["field"] {
                Value::String(s) if s == "Q" => "QQ".to_string(),
                Value::Object(o) => format!("GF({})", scalar(&o["Fp"])),
                other => scalar(other),
            };
            let vars: Vec<String> = m["vars"].as_array().map(|a| a.iter().map(scalar).collect()).unwrap_or_default();
            let _ = writeln!(out, "{pad}ring: {field}[{}] {}", vars.join(", "), scalar(&m["order"]));
        }
        Value::Object(m) => {
            let _ = writeln!(out, "{pad}{key}:");
            for (k, x) in m {
                render(out, k, x, depth + 1);
            }
        }
        Value::Array(items) if IDEAL_KEYS.contains(&key) => {
            let gens: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{pad}{key}: {}", render_generators(&gens));
        }
        Value::Array(rows) if !rows.is_empty() && rows.iter().all(Value::is_array) => {
            let _ = writeln!(out, "{pad}{key}:");
            for r in rows {
                let _ = writeln!(out, "{pad}  {}", scalar(r));
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{key}: {}", scalar(other));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn job(module: &str, command: &str) -> JobSpec {
        JobSpec::from_json(&format!(
            r#"{{"ring":{{"field":"Q","vars":["x","y"]}},"module":{module},"command":"{command}"}}"#
        ))
        .unwrap()
    }

    const E1: &str = r#"{"embedded":{"ambient_rank":2,"columns":[["x","0"],["y","0"],["0","1"]]}}"#;

    #[test]
    fn det0_report() {
        let r = run(&job(E1, "det0")).unwrap();
        assert_eq!(r["ideal"], json!(["x", "y"]));
        assert_eq!(r["height"], json!(2));
        assert_eq!(r["seed"], json!(DEFAULT_SEED));
        let text = format_report(&r);
        assert!(text.contains("ideal: (x, y)\n"), "{text}");
        assert!(text.contains("ring: QQ[x, y] grevlex\n"), "{text}");
    }

    #[test]
    fn fitting_above_n_is_unit() {
        let mut j = job(E1, "fitting");
        j.options.index = Some(99);
        assert_eq!(run(&j).unwrap()["ideal"], json!(["1"]));
        j.options.index = None;
        assert!(matches!(run(&j), Err(Error::Input(_))));
    }

    #[test]
    fn unit_and_zero_render() {
        let r = json!({"ideal": ["1"], "other": {"ideal": []}});
        assert_eq!(format_report(&r), "ideal: (1)\nother:\n  ideal: (0)\n");
    }

    #[test]
    fn presented_and_embedded_agree() {
        let p = job(r#"{"presented":{"n":3,"matrix":[["y"],["-x"],["0"]]}}"#, "fitting");
        let mut p = p;
        p.options.index = Some(2);
        assert_eq!(run(&p).unwrap()["ideal"], json!(["x", "y"]));
    }

    #[test]
    fn input_errors() {
        assert!(matches!(JobSpec::from_json("{"), Err(Error::Input(_))));
        let bad = job(r#"{"embedded":{"ambient_rank":2,"columns":[["x+","0"]]}}"#, "det0");
        let err = run(&bad).unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("columns[0][0]"), "{err}");
        let short = job(r#"{"embedded":{"ambient_rank":2,"columns":[["x"]]}}"#, "det0");
        assert!(matches!(run(&short), Err(Error::Input(_))));
        let mut fp = job(E1, "det0");
        fp.ring.field = FieldDescriptor::Prime(7);
        assert!(matches!(run(&fp), Err(Error::Input(_))));
    }

    #[test]
    fn precondition_exit_code() {
        let free = job(r#"{"embedded":{"ambient_rank":2,"columns":[["1","0"],["0","1"]]}}"#, "zak");
        assert_eq!(run(&free).unwrap_err().exit_code(), 2);
    }

    #[test]
    fn every_command_runs_on_e1() {
        for c in Command::ALL {
            let mut j = job(E1, c.name());
            j.options.index = Some(2);
            j.reduction = Some(vec![0, 1, 2]);
            let r = run(&j).unwrap_or_else(|e| panic!("{}: {e}", c.name()));
            assert_eq!(r["command"], json!(c.name()));
            assert_eq!(to_json(&r), to_json(&run(&j).unwrap()));
        }
    }

    #[test]
    fn warns_on_inhomogeneous_input() {
        let j = job(r#"{"embedded":{"ambient_rank":1,"columns":[["x"],["y+x^2"]]}}"#, "spread");
        assert!(run(&j).unwrap().get("warnings").is_some());
    }
}
