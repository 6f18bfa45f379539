//! The `adictrop` command line: argument parsing, job configuration and the
//! JSON, DOT, SVG and text renderings of each computation.

pub mod config;
pub mod svg;

use std::io::Write;
use std::path::{Path, PathBuf};

use adictrop::checks::{self, SuiteReport, SuiteSize};
use adictrop::degeneration::{adic_point_count, build_metrized_complex, default_tower_base, special_fiber, tower_simulate, EdgeLength};
use adictrop::polyhedra::io::{face_poset_dot, ComplexJson, ConeInput};
use adictrop::polyhedra::{fan_over_complex, AdmissibleCone, PolyhedralComplex};
use adictrop::tilted::{algebra_generators, binomial_relations, generator_names, tilted_semigroup, TiltedElement};
use adictrop::tropical::{exploded_fibration, extended_tropicalize, initial_form, tropicalize, OrbitPart};
use adictrop::valpoly::{parse_poly, parse_poly_with_vars, FieldProfile, LaurentPolynomial, PolyJson};
use adictrop::{Error, QVector, Rat, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

pub use config::{Format, Inputs, JobConfig};

pub const SCHEMA: &str = "adictrop/1";

#[derive(Debug, Parser)]
#[command(name = "adictrop", version, about = "Exact tropical geometry over valued fields")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON job configuration; flags override its entries.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Residue field: Q or F_p.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Value group (1/d)Z, given by d.
    #[arg(long, global = true)]
    pub gamma: Option<u64>,
    #[arg(long, global = true)]
    pub uniformizer: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write every artifact of the command into this directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct PolyArg {
    /// Polynomial text such as `x + y + t`, a JSON object, or `@file`.
    pub poly: String,
    /// Variable order, comma separated (default: alphabetical).
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tropical hypersurface of a polynomial.
    Trop(PolyArg),
    /// Initial form at a point.
    Initial {
        #[command(flatten)]
        poly: PolyArg,
        /// Comma separated rational coordinates.
        #[arg(long, allow_hyphen_values = true)]
        at: String,
    },
    /// Cells of the tropical hypersurface with their fibers.
    Explode {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        refine: Option<PathBuf>,
    },
    /// Tilted semigroup and algebra of a Gamma-admissible cone.
    Chart {
        #[arg(long)]
        cone: Option<PathBuf>,
        /// Names of the coordinates of M (default t, or t1, t2, ...).
        #[arg(long, value_delimiter = ',')]
        vars: Option<Vec<String>>,
        /// Largest degree of the listed relations.
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
    /// Special fiber of the model given by a polyhedral complex.
    Model {
        #[arg(long)]
        complex: Option<PathBuf>,
    },
    /// Metrized complex of a plane curve.
    Metrized {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long)]
        refine: Option<PathBuf>,
    },
    /// Subdivision tower of a decomposition of the line.
    Tower {
        /// Insertion points, comma separated, approaching the vertex.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        insert: Option<Vec<String>>,
        /// Number of insertions 1/2, 1/4, ... when --insert is absent.
        #[arg(long, default_value_t = 3)]
        stages: u32,
        /// Base decomposition (default: (-inf,0], [0,1], [1,inf)).
        #[arg(long)]
        complex: Option<PathBuf>,
        /// Distinguished vertex of the base.
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        vertex: String,
    },
    /// Tropicalization on every torus orbit of projective space.
    Extended(PolyArg),
    /// Randomized oracle suites.
    Check {
        #[arg(long)]
        polynomials: Option<usize>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        cones: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Trop(_) => "trop",
            Command::Initial { .. } => "initial",
            Command::Explode { .. } => "explode",
            Command::Chart { .. } => "chart",
            Command::Model { .. } => "model",
            Command::Metrized { .. } => "metrized",
            Command::Tower { .. } => "tower",
            Command::Extended(_) => "extended",
            Command::Check { .. } => "check",
        }
    }
}

/// The renderings of one result. JSON is always present.
pub struct Artifacts {
    pub json: Value,
    pub text: String,
    pub svg: Option<String>,
    pub dot: Option<String>,
    /// Whether the command found what it was asked to certify.
    pub success: bool,
}

impl Artifacts {
    fn new(json: Value, text: String) -> Artifacts {
        Artifacts { json, text, svg: None, dot: None, success: true }
    }

    fn get(&self, f: Format) -> Option<String> {
        match f {
            Format::Json => Some(serde_json::to_string_pretty(&self.json).expect("serializable") + "\n"),
            Format::Text => Some(self.text.clone()),
            Format::Svg => self.svg.clone(),
            Format::Dot => self.dot.clone(),
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn envelope(command: &str, profile: &FieldProfile, body: Value) -> Value {
    let mut m = serde_json::Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("command".into(), json!(command));
    m.insert("field".into(), to_value(profile));
    if let Value::Object(b) = body {
        m.extend(b);
    }
    Value::Object(m)
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidValue(format!("{}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::InvalidValue(format!("{what}: {e}")))
}

pub fn read_polynomial(arg: &PolyArg, profile: &FieldProfile) -> Result<LaurentPolynomial> {
    let text = match arg.poly.strip_prefix('@') {
        Some(path) => read(Path::new(path))?,
        None => arg.poly.clone(),
    };
    if text.trim_start().starts_with('{') {
        let j: PolyJson = parse_json(&text, "polynomial")?;
        return LaurentPolynomial::from_json(&j, profile);
    }
    match &arg.vars {
        Some(v) => parse_poly_with_vars(&text, v, profile),
        None => parse_poly(&text, profile),
    }
}

fn read_complex(path: &Path) -> Result<PolyhedralComplex> {
    parse_json::<ComplexJson>(&read(path)?, &path.display().to_string())?.build()
}

fn parse_point(s: &str) -> Result<QVector> {
    let coords = s.split(',').map(|c| c.trim().parse::<Rat>()).collect::<Result<Vec<_>>>()?;
    Ok(QVector::new(coords))
}

fn required(p: Option<PathBuf>, flag: &str) -> Result<PathBuf> {
    p.ok_or_else(|| Error::InvalidValue(format!("missing --{flag} (or inputs.{flag} in the config)")))
}

fn poly_body(f: &LaurentPolynomial) -> Value {
    json!({ "text": f.to_string(), "json": to_value(&f.to_json()) })
}

fn trop(f: &LaurentPolynomial) -> Result<Artifacts> {
    let t = tropicalize(f)?;
    let json = json!({ "polynomial": poly_body(f), "hypersurface": to_value(&t.to_json()) });
    let c = t.complex();
    let mut text = format!("tropical hypersurface of {f}\n");
    for (i, p) in c.cells().iter().enumerate() {
        text.push_str(&format!("  cell {i}: dim {} {p:?}  dual {:?}\n", p.dim(), t.dual(i).exponents));
    }
    let mut a = Artifacts::new(json, text);
    a.dot = Some(face_poset_dot(c, "trop", |p| format!("{p:?}")));
    if c.ambient_dim() <= 2 {
        let mut scene = svg::Scene::default();
        scene.complex(c, |_| None);
        a.svg = Some(scene.render(&format!("Trop({f})")));
    }
    Ok(a)
}

fn initial(f: &LaurentPolynomial, at: &str) -> Result<Artifacts> {
    let v = parse_point(at)?;
    let r = initial_form(f, &v)?.canonical();
    let json = json!({ "polynomial": poly_body(f), "point": to_value(&v), "initial_form": to_value(&r), "terms": r.len() });
    Ok(Artifacts::new(json, format!("{r}\n")))
}

fn explode(f: &LaurentPolynomial, refine: Option<&PolyhedralComplex>) -> Result<Artifacts> {
    let e = exploded_fibration(f, refine)?;
    let rows = adic_point_count(f, refine)?;
    let cells: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({
                "cell": r.cell,
                "dim": r.dim,
                "polyhedron": to_value(&e.base.cell(r.cell).to_json()),
                "trop_cell": e.trop_cell[r.cell],
                "fiber": to_value(&r.fiber),
                "components": to_value(&r.components),
            })
        })
        .collect();
    let mut text = String::from("cell  dim  fiber  components\n");
    for r in &rows {
        text.push_str(&format!("{:>4}  {:>3}  {}  {}\n", r.cell, r.dim, r.fiber, to_value(&r.components)));
    }
    let mut a = Artifacts::new(json!({ "polynomial": poly_body(f), "cells": cells }), text);
    a.dot = Some(face_poset_dot(&e.base, "explode", |p| format!("{p:?}")));
    Ok(a)
}

fn element_json(e: &TiltedElement, vars: &[String], unif: &str) -> Value {
    json!({ "u": to_value(&e.u), "n": to_value(&e.n), "monomial": e.render(vars, unif) })
}

fn chart(cone: &Path, vars: Option<Vec<String>>, degree: usize, profile: &FieldProfile) -> Result<Artifacts> {
    let input: ConeInput = parse_json(&read(cone)?, &cone.display().to_string())?;
    let cone = AdmissibleCone::new(input.build()?, profile.gamma)?;
    let s = tilted_semigroup(&cone)?;
    let n = s.rank();
    let vars = vars.unwrap_or_else(|| if n == 1 { vec!["t".into()] } else { (1..=n).map(|i| format!("t{i}")).collect() });
    if vars.len() != n {
        return Err(Error::Dimension { expected: n, found: vars.len() });
    }
    let unif = profile.uniformizer.as_str();
    let names = generator_names(&s, unif);
    let gens = algebra_generators(&s);
    let rels = binomial_relations(&s, degree)?;
    let basis: Vec<Value> = s
        .hilbert_basis()
        .iter()
        .zip(&names)
        .map(|(e, name)| {
            let mut v = element_json(e, &vars, unif);
            v["name"] = json!(name);
            v
        })
        .collect();
    let relations: Vec<Value> = rels
        .iter()
        .map(|r| json!({ "left": r.left, "right": r.right, "uniformizer": to_value(&r.uniformizer), "text": r.render(&names, unif) }))
        .collect();
    let json = json!({
        "cone": to_value(&cone.cone().to_json()),
        "gamma": profile.gamma.denominator(),
        "vars": vars,
        "hilbert_basis": basis,
        "units": s.units().iter().map(|e| element_json(e, &vars, unif)).collect::<Vec<_>>(),
        "generators": gens.iter().map(|e| element_json(e, &vars, unif)).collect::<Vec<_>>(),
        "relations": relations,
    });
    let mut text = String::from("hilbert basis:\n");
    for (e, name) in s.hilbert_basis().iter().zip(&names) {
        text.push_str(&format!("  {name} = {}  (u = {}, n = {})\n", e.render(&vars, unif), e.u, e.n));
    }
    if !s.units().is_empty() {
        let units: Vec<String> = s.units().iter().map(|e| e.render(&vars, unif)).collect();
        text.push_str(&format!("units: {}\n", units.join(", ")));
    }
    let rendered: Vec<String> = gens.iter().map(|e| e.render(&vars, unif)).collect();
    text.push_str(&format!("algebra generators: {{{}}}\n", rendered.join(", ")));
    text.push_str("relations:\n");
    for r in &rels {
        text.push_str(&format!("  {}\n", r.render(&names, unif)));
    }
    Ok(Artifacts::new(json, text))
}

fn model(complex: &Path, profile: &FieldProfile) -> Result<Artifacts> {
    let c = read_complex(complex)?;
    let d = fan_over_complex(&c, &profile.gamma)?;
    let s = special_fiber(&d)?;
    let mut text = format!("{} components, {} edges{}\n", s.components.len(), s.edges.len(), if s.partial { " (partial model)" } else { "" });
    for (i, k) in s.components.iter().enumerate() {
        text.push_str(&format!("  {i}: {} at {}\n", k.kind, k.vertex));
    }
    let mut a = Artifacts::new(json!({ "special_fiber": to_value(&s.to_json()) }), text);
    a.dot = Some(s.to_dot());
    Ok(a)
}

fn metrized(f: &LaurentPolynomial, refine: Option<&PolyhedralComplex>) -> Result<Artifacts> {
    let m = build_metrized_complex(f, refine)?;
    let mut text = String::new();
    for (i, v) in m.vertices.iter().enumerate() {
        text.push_str(&format!("vertex {i} at {}: {}\n", v.point, v.decoration));
    }
    let mut scene = svg::Scene::default();
    for e in &m.edges {
        let ends: Vec<String> = e.ends.iter().map(usize::to_string).collect();
        text.push_str(&format!("edge {} length {} direction {}: {}\n", ends.join("-"), e.length, e.direction, e.fiber));
        let a = &m.vertices[e.ends[0]].point;
        match (&e.length, e.ends.get(1)) {
            (EdgeLength::Finite(l), Some(&b)) => scene.segment(a, &m.vertices[b].point, Some(format!("{l}"))),
            _ => scene.ray(a, &e.direction.to_qvector(), false, None),
        }
    }
    for v in &m.vertices {
        scene.point(&v.point, Some(v.decoration.to_string()));
    }
    let mut a = Artifacts::new(json!({ "polynomial": poly_body(f), "metrized": to_value(&m) }), text);
    a.svg = Some(scene.render(&format!("metrized complex of {f}")));
    Ok(a)
}

fn tower(insert: Option<Vec<String>>, stages: u32, complex: Option<PathBuf>, vertex: &str, profile: &FieldProfile) -> Result<Artifacts> {
    let (base, v) = match complex {
        Some(p) => (read_complex(&p)?, parse_point(vertex)?),
        None => default_tower_base(),
    };
    let points: Vec<Rat> = match insert {
        Some(xs) => xs.iter().map(|x| x.trim().parse()).collect::<Result<_>>()?,
        None => (1..=stages).map(|k| Rat::new(1, 1u64 << k.min(62))).collect(),
    };
    let gamma = profile.gamma.enlarged_by(&points);
    let t = tower_simulate(&base, &v, &points, &gamma)?;
    let rows: Vec<Value> = t
        .stages
        .iter()
        .enumerate()
        .map(|(k, s)| {
            json!({
                "stage": k,
                "components": s.components,
                "interior_components": s.interior_components,
                "node": to_value(&s.node_neighbor),
                "edges": s.dual.edges.len(),
                "vertices": s.dual.components.iter().map(|c| to_value(&c.vertex)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let tr = &t.trace;
    let trace = json!({
        "vertex": to_value(&tr.vertex),
        "direction": to_value(&tr.direction),
        "nodes": to_value(&tr.nodes),
        "star_fixed": tr.star_fixed,
        "nodes_on_edges": tr.nodes_on_edges,
        "class": tr.class.to_string(),
    });
    let mut text = String::from("stage  components  node\n");
    for (k, s) in t.stages.iter().enumerate() {
        text.push_str(&format!("{k:>5}  {:>10}  {}\n", s.components, s.node_neighbor));
    }
    text.push_str(&format!(
        "trace at {} towards {}: {} (star fixed: {}, nodes on edges: {})\n",
        tr.vertex, tr.direction, tr.class, tr.star_fixed, tr.nodes_on_edges
    ));
    Ok(Artifacts::new(json!({ "gamma": gamma.denominator(), "insertions": to_value(&points), "stages": rows, "trace": trace }), text))
}

fn extended(f: &LaurentPolynomial) -> Result<Artifacts> {
    let orbits = extended_tropicalize(f)?;
    let mut text = String::new();
    let rows: Vec<Value> = orbits
        .iter()
        .map(|o| {
            let (kind, hyper) = match &o.part {
                OrbitPart::Empty => ("empty", Value::Null),
                OrbitPart::Whole => ("whole", Value::Null),
                OrbitPart::Hypersurface(t) => ("hypersurface", to_value(&t.to_json())),
            };
            let restriction = o.restriction.as_ref().map(|r| r.to_string());
            text.push_str(&format!(
                "{{{}}} = 0: {kind}{}\n",
                o.vanishing.join(", "),
                restriction.as_ref().map(|r| format!(" ({r})")).unwrap_or_default()
            ));
            json!({
                "vanishing": o.vanishing,
                "torus_vars": o.torus_vars,
                "restriction": restriction,
                "part": kind,
                "hypersurface": hyper,
            })
        })
        .collect();
    Ok(Artifacts::new(json!({ "polynomial": poly_body(f), "orbits": rows }), text))
}

/// Runs the suites on separate threads; reports come back in a fixed order.
pub fn run_suites(seed: u64, size: SuiteSize) -> Result<Vec<SuiteReport>> {
    type Suite = fn(u64, SuiteSize) -> Result<SuiteReport>;
    let suites: [Suite; 4] = [checks::fundamental_theorem_suite, checks::hilbert_suite, checks::duality_suite, checks::refinement_suite];
    std::thread::scope(|scope| {
        let handles: Vec<_> = suites.iter().map(|s| scope.spawn(move || s(seed, size))).collect();
        handles.into_iter().map(|h| h.join().expect("suite thread panicked")).collect()
    })
}

fn check(seed: u64, size: SuiteSize) -> Result<Artifacts> {
    let reports = run_suites(seed, size)?;
    let mut text = format!("seed {seed}\n{:<24} {:>6} {:>8} {:>9} {:>8}  result\n", "suite", "cases", "checks", "failures", "seconds");
    for r in &reports {
        text.push_str(&format!(
            "{:<24} {:>6} {:>8} {:>9} {:>8.2}  {}\n",
            r.name,
            r.cases,
            r.checks,
            r.failures.len(),
            r.elapsed.as_secs_f64(),
            if r.passed() { "PASS" } else { "FAIL" }
        ));
        for f in &r.failures {
            text.push_str(&format!("    {f}\n"));
        }
    }
    let mut a = Artifacts::new(json!({ "seed": seed, "suites": to_value(&reports) }), text);
    a.success = reports.iter().all(SuiteReport::passed);
    // timings differ between runs
    if let Some(suites) = a.json["suites"].as_array_mut() {
        for s in suites {
            s.as_object_mut().expect("object").remove("elapsed");
        }
    }
    Ok(a)
}

fn execute(cli: Cli) -> Result<(Artifacts, Format, Option<PathBuf>, &'static str)> {
    let g = cli.global;
    let file = match &g.config {
        Some(p) => JobConfig::load(p)?,
        None => JobConfig::default(),
    };
    let mut flags = JobConfig {
        field: g.field,
        gamma: g.gamma,
        uniformizer: g.uniformizer,
        format: g.format,
        seed: g.seed,
        out: g.out,
        inputs: Inputs::default(),
    };
    match &cli.command {
        Command::Explode { refine, .. } | Command::Metrized { refine, .. } => flags.inputs.refine = refine.clone(),
        Command::Chart { cone, .. } => flags.inputs.cone = cone.clone(),
        Command::Model { complex } | Command::Tower { complex, .. } => flags.inputs.complex = complex.clone(),
        _ => {}
    }
    let cfg = file.merge(flags);
    let name = cli.command.name();
    let default_unif = if name == "chart" { "p" } else { "t" };
    let profile = cfg.validate(default_unif)?;
    let format = cfg.format.unwrap_or(if name == "check" { Format::Text } else { Format::Json });
    let seed = cfg.seed(checks::DEFAULT_SEED)?;
    let refine = cfg.inputs.refine.as_deref().map(read_complex).transpose()?;

    let mut art = match cli.command {
        Command::Trop(p) => trop(&read_polynomial(&p, &profile)?)?,
        Command::Initial { poly, at } => initial(&read_polynomial(&poly, &profile)?, &at)?,
        Command::Explode { poly, .. } => explode(&read_polynomial(&poly, &profile)?, refine.as_ref())?,
        Command::Chart { vars, degree, .. } => chart(&required(cfg.inputs.cone.clone(), "cone")?, vars, degree, &profile)?,
        Command::Model { .. } => model(&required(cfg.inputs.complex.clone(), "complex")?, &profile)?,
        Command::Metrized { poly, .. } => metrized(&read_polynomial(&poly, &profile)?, refine.as_ref())?,
        Command::Tower { insert, stages, vertex, .. } => tower(insert, stages, cfg.inputs.complex.clone(), &vertex, &profile)?,
        Command::Extended(p) => extended(&read_polynomial(&p, &profile)?)?,
        Command::Check { polynomials, points, cones } => {
            let d = SuiteSize::default();
            let size = SuiteSize {
                polynomials: polynomials.unwrap_or(d.polynomials),
                points_per_polynomial: points.unwrap_or(d.points_per_polynomial),
                cones: cones.unwrap_or(d.cones),
            };
            check(seed, size)?
        }
    };
    art.json = envelope(name, &profile, art.json);
    Ok((art, format, cfg.out, name))
}

fn error_json(kind: &str, message: &str) -> String {
    json!({ "schema": SCHEMA, "error": { "kind": kind, "message": message } }).to_string()
}

/// Runs the command line `args` (including the program name), writing the
/// result to `out` and errors as JSON to `err`. Returns the exit status.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand) {
                let _ = write!(out, "{e}");
                return if e.kind() == ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand { 2 } else { 0 };
            }
            let _ = writeln!(err, "{}", error_json("usage", e.to_string().trim()));
            return 2;
        }
    };
    let (art, format, dir, name) = match execute(cli) {
        Ok(x) => x,
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(e.kind(), &e.to_string()));
            return 1;
        }
    };
    let Some(body) = art.get(format) else {
        let _ = writeln!(err, "{}", error_json("invalid_value", &format!("{name} has no {} output", format.extension())));
        return 1;
    };
    if let Some(dir) = dir {
        let written = std::fs::create_dir_all(&dir).and_then(|_| {
            for f in [Format::Json, Format::Text, Format::Svg, Format::Dot] {
                if let Some(s) = art.get(f) {
                    std::fs::write(dir.join(format!("{name}.{}", f.extension())), s)?;
                }
            }
            Ok(())
        });
        if let Err(e) = written {
            let _ = writeln!(err, "{}", error_json("io", &format!("{}: {e}", dir.display())));
            return 1;
        }
    }
    if out.write_all(body.as_bytes()).is_err() {
        return 1;
    }
    if art.success {
        0
    } else {
        1
    }
}
