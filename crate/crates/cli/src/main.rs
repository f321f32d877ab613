use std::collections::BTreeMap;
use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use wpzeta::count::{count_tower, COUNT_BOUND_ENV};
use wpzeta::padic::{
    deformation_matrix, katz_check, zeta_from_deformation, DeformationFamily, PadicRing, Zq,
};
use wpzeta::par::Strategy;
use wpzeta::resolve::{
    betti_euler, hj_length, k3_b2, new_point_counts, resolution_inventory, triangle_lattice,
};
use wpzeta::singular::singular_loci;
use wpzeta::tables::{auxiliary_genus, middle_dimension, table_with_invariants, Table, TableRow};
use wpzeta::wps::{elliptic_fiber, Hypersurface, Kind};
use wpzeta::zeta::{oracle_counts, verify_zeta, zeta, zeta_resolution, ZetaFunction};
use wpzeta::{Error, Result};

#[derive(Parser)]
#[command(
    name = "wpzeta",
    version,
    about = "Weighted projective hypersurfaces: tables, singularities, zeta functions"
)]
struct Cli {
    /// Print the JSON document instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Pretty-print the JSON document (implies --json).
    #[arg(long, global = true)]
    pretty: bool,
    /// Worker threads for the parallel parts; results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Ceiling on q^(n+1) for exhaustive counts.
    #[arg(long, global = true, env = COUNT_BOUND_ENV)]
    count_bound: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Regenerate a table with its invariants.
    Tables {
        /// Table name (elliptic-curves, k3, elliptic-fibered, elliptic-k3-fibered,
        /// positive-euler, k3-fibered) or its number 1..6. All tables if omitted.
        #[arg(long)]
        which: Option<String>,
    },
    /// Singular loci, resolution census and Betti numbers.
    Analyze(InputArgs),
    /// Resolution census, or the lattice data of one cyclic quotient.
    Resolve {
        #[command(flatten)]
        input: InputArgs,
        /// Triangle lattice of (1/m)(1,a,b), given as m,a,b.
        #[arg(long, value_delimiter = ',')]
        lattice: Option<Vec<u64>>,
        /// Hirzebruch–Jung chain of (1/m)(1,a), given as m,a.
        #[arg(long, value_delimiter = ',')]
        hj: Option<Vec<u64>>,
    },
    /// Zeta function over F_{p^k}, checked against exhaustive counts.
    Zeta {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// Zeta function of the crepant resolution.
        #[arg(long)]
        resolved: bool,
        /// Number of extensions to verify by counting (0 skips).
        #[arg(long, default_value_t = 2)]
        verify: u32,
    },
    /// Exhaustive point counts over F_q, ..., F_{q^nu}.
    Count {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long, default_value_t = 1)]
        nu: u32,
        /// Parameter values for deformed equations, e.g. mu=3.
        #[arg(long = "value", value_parser = parse_assignment)]
        values: Vec<(String, i64)>,
    },
    /// p-adic deformation of a monomial family.
    Deform {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        field: FieldArgs,
        /// p-adic precision N.
        #[arg(long, default_value_t = 4)]
        precision: u32,
        /// Truncation L of the parameter series; (N+2)q by default.
        #[arg(long)]
        truncation: Option<usize>,
        /// Parameter residues of the fibers to compute, e.g. mu=3 (repeatable).
        #[arg(long = "value", value_parser = parse_assignment)]
        values: Vec<(String, i64)>,
        /// Total degree of the deformation matrix in the summary.
        #[arg(long, default_value_t = 12)]
        summary_degree: usize,
        /// Also check A·Frob = F_0·A(ν^q) mod (p^3, ν^20).
        #[arg(long)]
        katz: bool,
    },
}

#[derive(Args, Clone)]
struct InputArgs {
    /// Hypersurface JSON (file path or inline), or one of E1, E2, E3,
    /// hasse, k3-sextic, genus-25.
    input: Option<String>,
    /// Diagonal hypersurface weights, e.g. 1,1,1.
    #[arg(long, value_delimiter = ',', requires = "degree")]
    weights: Option<Vec<u64>>,
    #[arg(long)]
    degree: Option<u64>,
    /// Default model of a table row: --table 4 --row 1.
    #[arg(long, requires = "row")]
    table: Option<String>,
    #[arg(long)]
    row: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct FieldArgs {
    #[arg(long)]
    p: u64,
    #[arg(long, default_value_t = 1)]
    k: u32,
}

fn parse_assignment(s: &str) -> std::result::Result<(String, i64), String> {
    let (name, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v = v.trim().parse::<i64>().map_err(|e| format!("{s:?}: {e}"))?;
    Ok((name.trim().to_string(), v))
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BadInput(_)
        | Error::DegreeMismatch(_)
        | Error::GcdObstruction(_)
        | Error::Undefined => 2,
        Error::ValidationFailure(_) => 3,
        Error::BoundExceeded { .. } => 4,
        Error::Unsupported(_) | Error::NoCharacter { .. } => 5,
        Error::RoundingAmbiguity { .. } => 6,
    }
}

struct Output {
    doc: Value,
    summary: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    if let Some(b) = cli.count_bound {
        std::env::set_var(COUNT_BOUND_ENV, b.to_string());
    }
    match run(&cli.command) {
        Ok(out) => {
            if cli.pretty {
                println!("{}", serde_json::to_string_pretty(&out.doc).unwrap());
            } else if cli.json {
                println!("{}", serde_json::to_string(&out.doc).unwrap());
            } else {
                print!("{}", out.summary);
            }
            let failed = out.doc.get("verified") == Some(&Value::Bool(false));
            if failed {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Tables { which } => run_tables(which.as_deref()),
        Command::Analyze(input) => run_analyze(&load(input)?),
        Command::Resolve { input, lattice, hj } => {
            run_resolve(input, lattice.as_deref(), hj.as_deref())
        }
        Command::Zeta {
            input,
            field,
            resolved,
            verify,
        } => run_zeta(&load(input)?, *field, *resolved, *verify),
        Command::Count {
            input,
            field,
            nu,
            values,
        } => run_count(&load(input)?, *field, *nu, values),
        Command::Deform {
            input,
            field,
            precision,
            truncation,
            values,
            summary_degree,
            katz,
        } => run_deform(
            &load(input)?,
            *field,
            *precision,
            *truncation,
            values,
            *summary_degree,
            *katz,
        ),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

// ---------------------------------------------------------------------------
// input

fn load(a: &InputArgs) -> Result<Hypersurface> {
    if let (Some(w), Some(d)) = (&a.weights, a.degree) {
        return Hypersurface::diagonal(w.clone(), d);
    }
    if let (Some(t), Some(r)) = (&a.table, a.row) {
        let t: Table = t.parse()?;
        let rows = table_with_invariants(t)?;
        let row = rows
            .iter()
            .find(|x| x.number == r && !x.extra)
            .ok_or_else(|| Error::BadInput(format!("table {t} has no row {r}")))?;
        return row.model.clone().ok_or_else(|| {
            Error::Unsupported(format!("row {r} of {t} has no quasi-smooth default model"))
        });
    }
    let Some(s) = &a.input else {
        return Err(Error::BadInput(
            "no input: give JSON, a name, --weights/--degree or --table/--row".into(),
        ));
    };
    let named = match s.as_str() {
        "E1" | "E2" | "E3" => Some(elliptic_fiber(s[1..].parse().unwrap())?.0),
        "hasse" => Some(DeformationFamily::hasse_pencil().to_hypersurface()?),
        "k3-sextic" => Some(DeformationFamily::k3_sextic_family().to_hypersurface()?),
        "genus-25" => Some(DeformationFamily::genus_25_family().to_hypersurface()?),
        _ => None,
    };
    if let Some(h) = named {
        return Ok(h);
    }
    let text = if s.trim_start().starts_with('{') {
        s.clone()
    } else {
        std::fs::read_to_string(Path::new(s)).map_err(|e| Error::BadInput(format!("{s}: {e}")))?
    };
    let h: Hypersurface = serde_json::from_str(&text)
        .map_err(|e| Error::BadInput(format!("hypersurface JSON: {e}")))?;
    h.validate()?;
    Ok(h)
}

fn describe(h: &Hypersurface) -> String {
    let params: BTreeMap<String, i64> = BTreeMap::new();
    let eq = match h.kind {
        Kind::Deformed => {
            let mut s = h
                .poly_with(&h.deformation.iter().map(|d| (d.param.clone(), 1)).collect())
                .map(|p| p.to_equation_string())
                .unwrap_or_default();
            for d in &h.deformation {
                s.push_str(&format!("  [{} on {:?}]", d.param, d.monomial));
            }
            s
        }
        _ => h
            .poly_with(&params)
            .map(|p| p.to_equation_string())
            .unwrap_or_default(),
    };
    format!("P{:?} degree {}: {}", h.weights, h.degree, eq)
}

// ---------------------------------------------------------------------------
// tables

fn opt<T: ToString>(x: &Option<T>) -> String {
    x.as_ref()
        .map(|v| v.to_string())
        .unwrap_or_else(|| "-".into())
}

fn list(x: &[u64]) -> String {
    format!(
        "({})",
        x.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

fn run_tables(which: Option<&str>) -> Result<Output> {
    let tables: Vec<Table> = match which {
        Some(w) => vec![w.parse()?],
        None => Table::ALL.to_vec(),
    };
    let mut docs = Vec::new();
    let mut summary = String::new();
    for t in tables {
        let rows = table_with_invariants(t)?;
        summary.push_str(&format!(
            "Table {} ({}), {} rows\n",
            t.number(),
            t.name(),
            rows.len()
        ));
        for r in &rows {
            summary.push_str(&table_line(r));
        }
        docs.push(json!({ "table": t.name(), "number": t.number(), "rows": to_value(&rows) }));
    }
    let doc = if docs.len() == 1 {
        docs.pop().unwrap()
    } else {
        Value::Array(docs)
    };
    Ok(Output { doc, summary })
}

fn table_line(r: &TableRow) -> String {
    let factor = r
        .curve
        .as_ref()
        .or(r.surface.as_ref())
        .map(|v| list(v))
        .unwrap_or_default();
    let mark = if r.extra { "*" } else { " " };
    let inv = match (r.b2, r.chi) {
        (Some(b2), _) => format!("b2={b2}"),
        (_, Some(chi)) => format!("h11={} h21={} chi={chi}", opt(&r.h11), opt(&r.h21)),
        _ => String::new(),
    };
    format!(
        "{mark}{:>3}  {:<16} {:<4} ell={:<3} k={:<24} d={:<5} {}\n",
        r.number,
        factor,
        r.fiber,
        opt(&r.ell),
        list(&r.k),
        r.d,
        inv
    )
}

// ---------------------------------------------------------------------------
// analyze / resolve

fn run_analyze(h: &Hypersurface) -> Result<Output> {
    let loci = singular_loci(h)?;
    let mut doc = json!({ "hypersurface": to_value(h), "loci": to_value(&loci) });
    let mut summary = format!("{}\n{} singular loci\n", describe(h), loci.len());
    for l in &loci {
        summary.push_str(&format!(
            "  {:?} on z{:?}: order {}, action {:?}, {}\n",
            l.kind, l.indices, l.order, l.action.exponents, l.residual_equation
        ));
    }
    if h.cy_condition() {
        let inv = resolution_inventory(h)?;
        summary.push_str(&inventory_summary(&inv));
        doc["inventory"] = to_value(&inv);
        let middle = middle_dimension(h)?;
        doc["middle"] = json!(middle);
        match h.dim() {
            2 => {
                let b2 = k3_b2(&inv, middle);
                summary.push_str(&format!("b2 = {b2}\n"));
                doc["b2"] = json!(b2);
            }
            3 => {
                let b = betti_euler(&inv, middle, auxiliary_genus(h))?;
                summary.push_str(&format!(
                    "h11 = {}, h21 = {}, chi = {}\n",
                    b.h11, b.h21, b.chi
                ));
                doc["betti"] = to_value(&b);
            }
            _ => {}
        }
    }
    Ok(Output { doc, summary })
}

fn inventory_summary(inv: &wpzeta::resolve::ResolutionInventory) -> String {
    let mut s = String::new();
    for r in &inv.ruled {
        s.push_str(&format!(
            "  {} ruled surface(s) over a genus-{} curve on z{:?} (order {})\n",
            r.n, r.genus, r.indices, r.order
        ));
    }
    for p in &inv.planes {
        s.push_str(&format!(
            "  {} exceptional divisor(s) per point, {} point(s) on z{:?}, action {:?} mod {}\n",
            p.e, p.points, p.indices, p.action.exponents, p.action.order
        ));
    }
    s
}

fn run_resolve(input: &InputArgs, lattice: Option<&[u64]>, hj: Option<&[u64]>) -> Result<Output> {
    if let Some(v) = lattice {
        if v.len() != 3 {
            return Err(Error::BadInput("--lattice takes m,a,b".into()));
        }
        let t = triangle_lattice(v[0], v[1], v[2])?;
        let summary = format!(
            "(1/{})(1,{},{}): {} interior points, {} and {} on the sides\n",
            t.m, t.a, t.b, t.interior, t.side_ac_interior, t.side_bc_interior
        );
        return Ok(Output {
            doc: to_value(&t),
            summary,
        });
    }
    if let Some(v) = hj {
        if v.len() != 2 {
            return Err(Error::BadInput("--hj takes m,a".into()));
        }
        let n = hj_length(v[0], v[1]);
        return Ok(Output {
            doc: json!({ "m": v[0], "a": v[1], "length": n }),
            summary: format!("(1/{})(1,{}): chain of {n} curves\n", v[0], v[1]),
        });
    }
    let h = load(input)?;
    let inv = resolution_inventory(&h)?;
    let summary = format!(
        "{}\n{} exceptional classes\n{}",
        describe(&h),
        inv.exceptional_classes(),
        inventory_summary(&inv)
    );
    Ok(Output {
        doc: json!({ "hypersurface": to_value(&h), "inventory": to_value(&inv) }),
        summary,
    })
}

// ---------------------------------------------------------------------------
// zeta / count

fn zeta_doc(z: &ZetaFunction) -> Value {
    json!({
        "q": z.q,
        "dim": z.dim,
        "factors": z.factors.iter().map(|f| f.to_strings()).collect::<Vec<_>>(),
        "functional_equations": z.satisfies_functional_equations(),
    })
}

fn zeta_summary(z: &ZetaFunction) -> String {
    let mut s = format!("Z(t) over F_{}:\n", z.q);
    for (i, f) in z.factors.iter().enumerate() {
        if !f.is_one() {
            s.push_str(&format!("  P{i} = {f}\n"));
        }
    }
    s
}

fn run_zeta(h: &Hypersurface, field: FieldArgs, resolved: bool, verify: u32) -> Result<Output> {
    let FieldArgs { p, k } = field;
    let base = zeta(h, p, k)?;
    let z = if resolved {
        zeta_resolution(&base, &resolution_inventory(h)?, p, k)?
    } else {
        base.clone()
    };
    let mut doc =
        json!({ "hypersurface": to_value(h), "zeta": zeta_doc(&z), "resolved": resolved });
    let mut summary = format!("{}\n{}", describe(h), zeta_summary(&z));
    if verify == 0 {
        doc["verified"] = Value::Null;
        return Ok(Output { doc, summary });
    }
    let nu = if resolved { 1 } else { verify };
    match oracle_counts(h, p, k, nu) {
        Ok(counts) => {
            let (ok, expected) = if resolved {
                let inv = resolution_inventory(h)?;
                let curves = inv
                    .ruled
                    .iter()
                    .map(|r| count_tower(&r.curve.equation, p, k, 1).map(|c| c[0]))
                    .collect::<Result<Vec<u64>>>()?;
                let extra: u128 = new_point_counts(&inv, p, k, 1, &curves).iter().sum();
                let n1 = counts[0] as u128 + extra;
                (z.counts(1)[0] == BigInt::from(n1), vec![n1.to_string()])
            } else {
                (
                    verify_zeta(&z, &counts),
                    counts.iter().map(|c| c.to_string()).collect(),
                )
            };
            summary.push_str(&format!(
                "counts {} by {}: {}\n",
                if ok { "match" } else { "DO NOT match" },
                if resolved {
                    "N_1(X) plus exceptional points"
                } else {
                    "exhaustive enumeration"
                },
                expected.join(", ")
            ));
            doc["oracle_counts"] = json!(expected);
            doc["verified"] = json!(ok);
        }
        Err(e @ Error::BoundExceeded { .. }) => {
            summary.push_str(&format!("not verified: {e}\n"));
            doc["verified"] = Value::Null;
            doc["verification_skipped"] = json!(e.to_string());
        }
        Err(e) => return Err(e),
    }
    Ok(Output { doc, summary })
}

fn run_count(
    h: &Hypersurface,
    field: FieldArgs,
    nu: u32,
    values: &[(String, i64)],
) -> Result<Output> {
    let params: BTreeMap<String, i64> = values.iter().cloned().collect();
    let poly = h.poly_with(&params)?;
    let counts = count_tower(&poly, field.p, field.k, nu)?;
    let q = field.p.pow(field.k);
    let mut summary = format!("{}\n", describe(h));
    for (i, c) in counts.iter().enumerate() {
        summary.push_str(&format!("  #X(F_{}^{}) = {c}\n", q, i + 1));
    }
    Ok(Output {
        doc: json!({ "hypersurface": to_value(h), "params": params, "q": q, "counts": counts }),
        summary,
    })
}

// ---------------------------------------------------------------------------
// deform

fn zq_value(r: &PadicRing, x: &Zq) -> Value {
    match r.to_integer(x, r.prec) {
        Some(n) => json!(n.to_string()),
        None => json!(x.0.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    }
}

fn run_deform(
    h: &Hypersurface,
    field: FieldArgs,
    precision: u32,
    truncation: Option<usize>,
    values: &[(String, i64)],
    summary_degree: usize,
    katz: bool,
) -> Result<Output> {
    let fam = DeformationFamily::from_hypersurface(h)?;
    let ring = PadicRing::new(field.p, field.k, precision)?;
    let a = deformation_matrix(&fam, summary_degree, Strategy::default())?;
    let predicted = fam.predicted_support(&a.types);
    let support = a.support();
    let pattern: Vec<String> = support
        .iter()
        .map(|r| r.iter().map(|&b| if b { '#' } else { '.' }).collect())
        .collect();
    let mut leading = Vec::new();
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            if let Some(((r, s), c)) = a.leading_term(i, j) {
                leading.push(
                    json!({ "row": i, "col": j, "monomial": [r, s], "coefficient": c.to_string() }),
                );
            }
        }
    }
    let mut doc = json!({
        "family": to_value(&fam),
        "types": a.types.iter().map(|t| t.exponents.clone()).collect::<Vec<_>>(),
        "support": pattern,
        "support_matches_prediction": support == predicted,
        "leading_terms": leading,
        "summary_degree": summary_degree,
    });
    let mut summary = format!(
        "{}\n{} types; support of A mod degree {} {} the predicted pattern\n",
        describe(h),
        a.dim(),
        summary_degree,
        if support == predicted {
            "matches"
        } else {
            "DOES NOT match"
        }
    );
    if a.dim() <= 40 {
        for row in &doc["support"].as_array().unwrap().clone() {
            summary.push_str(&format!("  {}\n", row.as_str().unwrap()));
        }
    }
    let mut all_ok = support == predicted;
    if katz {
        let r3 = ring.with_precision(3)?;
        let rep = katz_check(&fam, &r3, 20)?;
        summary.push_str(&format!(
            "Frobenius relation mod (p^3, t^20): integral={}, holds={}\n",
            rep.integral, rep.holds
        ));
        all_ok &= rep.integral && rep.holds;
        doc["katz"] = to_value(&rep);
    }
    let mut fibers = Vec::new();
    for (name, v) in values {
        if !fam.params.contains(name) {
            return Err(Error::BadInput(format!(
                "the family has no parameter {name}"
            )));
        }
        let z = zeta_from_deformation(&fam, &[*v], &ring, truncation)?;
        let frob: Vec<Vec<Value>> = z
            .frobenius
            .entries
            .iter()
            .map(|r| r.iter().map(|x| zq_value(&ring, x)).collect())
            .collect();
        summary.push_str(&format!(
            "{name} = {}: det(1 - T F) = {}  (L = {}, counts {:?} verified)\n",
            v, z.primitive, z.truncation, z.counts
        ));
        fibers.push(json!({
            "param": name,
            "value": v,
            "primitive": z.primitive.to_strings(),
            "zeta": zeta_doc(&z.zeta),
            "frobenius": frob,
            "truncation": z.truncation,
            "series_degree": z.series_degree,
            "precision": z.precision,
            "oracle_counts": z.counts,
            "verified": true,
        }));
    }
    doc["fibers"] = Value::Array(fibers);
    doc["p"] = json!(field.p);
    doc["k"] = json!(field.k);
    doc["verified"] = json!(all_ok);
    Ok(Output { doc, summary })
}
