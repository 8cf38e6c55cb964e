//! Command-line surface: construct objects, run verifications, compute
//! orders, and emit machine-readable reports.
//!
//! Output is JSON (schema `twistkit/1`) or `--format text`; identical
//! seeds and arguments produce byte-identical output. Exit codes: 0 on
//! success/verified, 1 on verification failure, 2 on usage errors
//! (unknown type, malformed field spec, cap exceeded).

use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use twistkit::chevalley::{alpha_sigma, BruhatForm, ChevalleyGroup, SpecialIsogeny};
use twistkit::fields::{Ring, RingRef};
use twistkit::maps::RingMap;
use twistkit::matrix::Matrix;
use twistkit::mixedgrp::{
    base_change_group, descent_check, verify_membership, DescentCheck, MixedGroupDescriptor,
};
use twistkit::rootsystem::{RootSystem, SystemType};
use twistkit::suzree::{
    exhaustive_fixed_points, twisted_group, verify_all_fixed, ClosureOptions,
    TwistedGroupDescriptor, DEFAULT_CAP,
};
use twistkit::twistmix::{
    self, check_mixed_morphism, count_automorphisms, mix, tau, twix, MixedMorphism, MixedRing,
    TwistedRing,
};

const SCHEMA: &str = "twistkit/1";

#[derive(Parser)]
#[command(name = "twistkit", about = "Exact Suzuki–Ree and mixed group computations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
struct Common {
    /// Deterministic seed for all sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on enumerated elements.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Force the sequential closure engine.
    #[arg(long)]
    serial: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the order of a Suzuki or small Ree group by closure.
    Order {
        /// Twisted group type: 2B2 or 2G2.
        #[arg(long = "type")]
        ty: String,
        /// Field size q = p^h with h odd (p = 2 for 2B2, 3 for 2G2).
        #[arg(long)]
        q: u64,
        /// Also run the exhaustive Bruhat-form fixed-point filter and
        /// compare (only feasible for tiny q).
        #[arg(long)]
        exhaustive: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Print the Bruhat normal form of a group element.
    Bruhat {
        /// Group type: B2, C2 or G2.
        #[arg(long = "type")]
        ty: String,
        /// Field spec: F<q>, F<p>(t) or F<p>(t^<p>).
        #[arg(long)]
        field: String,
        /// Length of the random generator word.
        #[arg(long, default_value_t = 8)]
        word_len: usize,
        /// Read the element from a JSON matrix file instead of sampling.
        #[arg(long)]
        matrix_file: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run a verification suite.
    Verify {
        /// Property: alpha-squared, chevalley, bruhat, mixed, torus-image,
        /// category or descent.
        #[arg(long)]
        prop: String,
        /// Group type, when the property needs one.
        #[arg(long = "type")]
        ty: Option<String>,
        /// Field spec, when the property needs one.
        #[arg(long)]
        field: Option<String>,
        /// Field size shortcut for finite fields.
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check twisted descent on mixed data.
    Descent {
        /// Type: B2, C2, G2, or a root-system-level Bn/Cn/F4.
        #[arg(long = "type")]
        ty: String,
        /// Field spec: F<q> (taken as the twix image of (F_q, σ)) or
        /// F<p>(t) (taken as the mixed field (F_p(t^p), F_p(t))).
        #[arg(long)]
        field: String,
        /// Use mix(F_q) = (F_q, F_q, id, fr) instead of the twix image.
        #[arg(long)]
        mix: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Dump a root system with lengths and the duality table.
    Report {
        /// Root system type: B<n>, C<n>, G2 or F4.
        #[arg(long = "type")]
        ty: String,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

/// Parses `F<q>`, `F<p>(t)` and `F<p>(t^<p>)`.
fn parse_field(spec: &str) -> Result<RingRef, String> {
    let s = spec.trim();
    let rest = s
        .strip_prefix('F')
        .ok_or_else(|| format!("malformed field spec {spec:?}: expected F<q> or F<p>(t)"))?;
    if let Some(open) = rest.find('(') {
        let p: u64 = rest[..open]
            .parse()
            .map_err(|_| format!("malformed field spec {spec:?}"))?;
        let inner = rest[open..]
            .strip_prefix('(')
            .and_then(|x| x.strip_suffix(')'))
            .ok_or_else(|| format!("malformed field spec {spec:?}"))?;
        if inner == "t" {
            return Ring::rational_function(p).map_err(|e| e.to_string());
        }
        if let Some(exp) = inner.strip_prefix("t^") {
            let e: u64 = exp
                .parse()
                .map_err(|_| format!("malformed field spec {spec:?}"))?;
            if e != p {
                return Err(format!(
                    "only the subfield F{p}(t^{p}) is supported, got exponent {e}"
                ));
            }
            return Ring::rational_function_subfield(p).map_err(|e| e.to_string());
        }
        return Err(format!("malformed field spec {spec:?}"));
    }
    let q: u64 = rest
        .parse()
        .map_err(|_| format!("malformed field spec {spec:?}"))?;
    let (p, h) = factor_prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
    Ring::finite_field(p, h, None).map_err(|e| e.to_string())
}

fn factor_prime_power(q: u64) -> Option<(u64, usize)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            let mut h = 0;
            let mut rest = q;
            while rest.is_multiple_of(p) {
                rest /= p;
                h += 1;
            }
            return (rest == 1).then_some((p, h));
        }
        p += 1;
    }
    Some((q, 1))
}

fn twisted_descriptor(ty: &str, q: u64) -> Result<TwistedGroupDescriptor, String> {
    let (stype, p) = match ty.to_ascii_uppercase().as_str() {
        "2B2" => (SystemType::B(2), 2),
        "2G2" => (SystemType::G2, 3),
        _ => return Err(format!("unknown twisted type {ty:?}: expected 2B2 or 2G2")),
    };
    let (qp, h) = factor_prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
    if qp != p {
        return Err(format!("{ty} needs characteristic {p}, got q = {q}"));
    }
    if h % 2 == 0 {
        return Err(format!(
            "{ty} needs q = {p}^h with h odd (no Tits endomorphism otherwise)"
        ));
    }
    let field = TwistedRing::f_sqrt_q(p, h).map_err(|e| e.to_string())?;
    TwistedGroupDescriptor::new(stype, field).map_err(|e| e.to_string())
}

fn emit<T: Serialize>(common: &Common, report: &T, text: String) {
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("serializable report")
        ),
        Format::Text => println!("{text}"),
    }
}

fn run(cmd: Command) -> Result<ExitCode, String> {
    match cmd {
        Command::Order {
            ty,
            q,
            exhaustive,
            common,
        } => order_cmd(&ty, q, exhaustive, &common),
        Command::Bruhat {
            ty,
            field,
            word_len,
            matrix_file,
            common,
        } => bruhat_cmd(&ty, &field, word_len, matrix_file.as_deref(), &common),
        Command::Verify {
            prop,
            ty,
            field,
            q,
            samples,
            common,
        } => verify_cmd(&prop, ty.as_deref(), field.as_deref(), q, samples, &common),
        Command::Descent {
            ty,
            field,
            mix: use_mix,
            common,
        } => descent_cmd(&ty, &field, use_mix, &common),
        Command::Report { ty, common } => report_cmd(&ty, &common),
    }
}

#[derive(Serialize)]
struct OrderReport {
    schema: &'static str,
    command: &'static str,
    group: String,
    q: u64,
    order: usize,
    generators_used: usize,
    closure_steps: usize,
    verified_fixed_points: bool,
    expected_order: Option<u64>,
    exhaustive_order: Option<usize>,
}

fn order_cmd(ty: &str, q: u64, exhaustive: bool, common: &Common) -> Result<ExitCode, String> {
    let desc = twisted_descriptor(ty, q)?;
    let opts = ClosureOptions {
        cap: common.cap,
        parallel: !common.serial && ClosureOptions::default().parallel,
    };
    let (set, stats) = twisted_group(&desc, &opts).map_err(|e| e.to_string())?;
    let verified = verify_all_fixed(&desc, &set, opts.parallel).map_err(|e| e.to_string())?;
    let exhaustive_order = if exhaustive {
        Some(
            exhaustive_fixed_points(&desc, &opts)
                .map_err(|e| e.to_string())?
                .len(),
        )
    } else {
        None
    };
    let report = OrderReport {
        schema: SCHEMA,
        command: "order",
        group: ty.to_ascii_uppercase(),
        q,
        order: stats.order,
        generators_used: stats.generators_used,
        closure_steps: stats.closure_steps,
        verified_fixed_points: verified,
        expected_order: desc.expected_order(),
        exhaustive_order,
    };
    let ok = verified
        && report.expected_order == Some(report.order as u64)
        && exhaustive_order.is_none_or(|n| n == report.order);
    emit(
        common,
        &report,
        format!(
            "|{}({q})| = {} ({} generators, {} closure steps, fixed points verified: {verified})",
            report.group, report.order, report.generators_used, report.closure_steps
        ),
    );
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct BruhatReport {
    schema: &'static str,
    command: &'static str,
    group: String,
    field: String,
    element: MatrixJson,
    u: BTreeMap<String, String>,
    h: BTreeMap<String, String>,
    w: Vec<usize>,
    v: BTreeMap<String, String>,
    roundtrip_exact: bool,
}

#[derive(Serialize, serde::Deserialize)]
struct MatrixJson {
    n: usize,
    /// Row-major canonical element encodings, hex.
    entries: Vec<String>,
}

fn matrix_to_json(m: &Matrix, ring: &RingRef) -> MatrixJson {
    MatrixJson {
        n: m.n,
        entries: m
            .data
            .iter()
            .map(|v| hex_encode(&ring.encode(v)))
            .collect(),
    }
}

fn matrix_from_json(j: &MatrixJson, ring: &RingRef) -> Result<Matrix, String> {
    if j.entries.len() != j.n * j.n {
        return Err("matrix entry count does not match the dimension".into());
    }
    let data = j
        .entries
        .iter()
        .map(|h| {
            let bytes = hex_decode(h)?;
            ring.decode(&bytes).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(Matrix { n: j.n, data })
}

fn hex_encode(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn hex_decode(s: &str) -> Result<Vec<u8>, String> {
    if !s.len().is_multiple_of(2) {
        return Err("odd-length hex string".into());
    }
    (0..s.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(&s[i..i + 2], 16).map_err(|e| e.to_string()))
        .collect()
}

fn root_label(rs: &RootSystem, r: usize) -> String {
    let coords: Vec<String> = rs.root(r).iter().map(|c| c.to_string()).collect();
    format!("({})", coords.join(","))
}

fn form_to_report(
    group: &ChevalleyGroup,
    form: &BruhatForm,
    element: &Matrix,
    field: String,
    roundtrip_exact: bool,
) -> BruhatReport {
    let rs = group.system();
    let ring = &group.ring;
    let mut u = BTreeMap::new();
    for (r, t) in form.u.iter().enumerate() {
        if !ring.is_zero(t) {
            u.insert(root_label(rs, r), ring.render(t));
        }
    }
    let mut h = BTreeMap::new();
    for (j, v) in form.torus.values.iter().enumerate() {
        h.insert(root_label(rs, rs.simple_roots()[j]), ring.render(v));
    }
    let mut v_map = BTreeMap::new();
    for (&r, t) in rs.phi_w(&form.w).iter().zip(&form.v) {
        if !ring.is_zero(t) {
            v_map.insert(root_label(rs, r), ring.render(t));
        }
    }
    BruhatReport {
        schema: SCHEMA,
        command: "bruhat",
        group: rs.stype().to_string(),
        field,
        element: matrix_to_json(element, ring),
        u,
        h,
        w: form.w.word.clone(),
        v: v_map,
        roundtrip_exact,
    }
}

fn bruhat_cmd(
    ty: &str,
    field: &str,
    word_len: usize,
    matrix_file: Option<&str>,
    common: &Common,
) -> Result<ExitCode, String> {
    let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
    let ring = parse_field(field)?;
    let group = ChevalleyGroup::new(stype, ring.clone()).map_err(|e| e.to_string())?;
    let element = match matrix_file {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
            let j: MatrixJson = serde_json::from_str(&text).map_err(|e| e.to_string())?;
            matrix_from_json(&j, &ring)?
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            group.random_element(&mut rng, word_len, 2)
        }
    };
    let form = group.decompose(&element).map_err(|e| e.to_string())?;
    let recomposed = group.compose(&form).map_err(|e| e.to_string())?;
    let exact = recomposed == element;
    let report = form_to_report(&group, &form, &element, field.to_string(), exact);
    let text = format!(
        "g = u·h·n_w·v over {field}: w = {:?}, {} u-parameters, {} v-parameters, roundtrip exact: {exact}",
        report.w,
        report.u.len(),
        report.v.len()
    );
    emit(common, &report, text);
    Ok(if exact { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct VerifyReport {
    schema: &'static str,
    command: &'static str,
    prop: String,
    samples: usize,
    passed: usize,
    failed: usize,
    details: BTreeMap<String, String>,
    counterexamples: Vec<String>,
}

fn verify_cmd(
    prop: &str,
    ty: Option<&str>,
    field: Option<&str>,
    q: Option<u64>,
    samples: usize,
    common: &Common,
) -> Result<ExitCode, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
    let mut report = VerifyReport {
        schema: SCHEMA,
        command: "verify",
        prop: prop.to_string(),
        samples,
        passed: 0,
        failed: 0,
        details: BTreeMap::new(),
        counterexamples: Vec::new(),
    };
    match prop {
        "alpha-squared" => {
            let ty = ty.ok_or("--type is required for alpha-squared")?;
            let q = q.ok_or("--q is required for alpha-squared")?;
            let stype = match ty.to_ascii_uppercase().as_str() {
                "B2" | "2B2" => SystemType::B(2),
                "G2" | "2G2" => SystemType::G2,
                other => return Err(format!("unsupported type {other} for alpha-squared")),
            };
            let (p, h) = factor_prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
            if h % 2 == 0 {
                return Err("q must be an odd power for a Tits endomorphism".into());
            }
            let field = TwistedRing::f_sqrt_q(p, h).map_err(|e| e.to_string())?;
            let group =
                ChevalleyGroup::new(stype, field.carrier.clone()).map_err(|e| e.to_string())?;
            let iso = SpecialIsogeny::alpha_pi(group.clone()).map_err(|e| e.to_string())?;
            for i in 0..samples {
                let g = group.random_element(&mut rng, 5, 0);
                let pi2 = iso
                    .apply(&iso.apply(&g).map_err(|e| e.to_string())?)
                    .map_err(|e| e.to_string())?;
                let fr = group.frobenius_on_points(&g);
                let s2 = alpha_sigma(
                    &group,
                    &alpha_sigma(&group, &g, &field.twister).map_err(|e| e.to_string())?,
                    &field.twister,
                )
                .map_err(|e| e.to_string())?;
                if pi2 == fr && s2 == fr {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    if report.counterexamples.len() < 5 {
                        report.counterexamples.push(format!("word {i}"));
                    }
                }
            }
        }
        "chevalley" => {
            let ty = ty.ok_or("--type is required for chevalley")?;
            let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
            let ring = ring_from_args(field, q)?;
            let group = ChevalleyGroup::new(stype, ring.clone()).map_err(|e| e.to_string())?;
            let rs = group.system().clone();
            for i in 0..samples {
                use rand::Rng;
                let r = rng.gen_range(0..rs.num_roots());
                let s = ring.sample(&mut rng, 2);
                let t = ring.sample(&mut rng, 2);
                let one_param =
                    group.x(r, &s).mul(&group.x(r, &t), &ring) == group.x(r, &ring.add(&s, &t));
                // Torus conjugation.
                let torus = twistkit::chevalley::TorusElement {
                    values: (0..rs.rank())
                        .map(|_| ring.sample_unit(&mut rng, 2))
                        .collect(),
                };
                let hm = group.torus_matrix(&torus).map_err(|e| e.to_string())?;
                let h_inv = hm.inverse(&ring).map_err(|e| e.to_string())?;
                let chi = group
                    .character_value(&torus, r)
                    .map_err(|e| e.to_string())?;
                let conj = hm.mul(&group.x(r, &t), &ring).mul(&h_inv, &ring)
                    == group.x(r, &ring.mul(&chi, &t));
                // The commutator of a non-proportional positive pair has a
                // purely unipotent normal form.
                let a = rng.gen_range(0..rs.num_positive());
                let b = loop {
                    let b = rng.gen_range(0..rs.num_positive());
                    if b != a {
                        break b;
                    }
                };
                let ta = ring.sample(&mut rng, 1);
                let tb = ring.sample(&mut rng, 1);
                let comm = group
                    .x(a, &ta)
                    .mul(&group.x(b, &tb), &ring)
                    .mul(&group.x(a, &ring.neg(&ta)), &ring)
                    .mul(&group.x(b, &ring.neg(&tb)), &ring);
                let cform = group.decompose(&comm).map_err(|e| e.to_string())?;
                let comm_ok = cform.w.is_identity()
                    && group.compose(&cform).map_err(|e| e.to_string())? == comm;
                if one_param && conj && comm_ok {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    if report.counterexamples.len() < 5 {
                        report.counterexamples.push(format!("instance {i}"));
                    }
                }
            }
        }
        "bruhat" => {
            let ty = ty.ok_or("--type is required for bruhat")?;
            let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
            let ring = ring_from_args(field, q)?;
            let group = ChevalleyGroup::new(stype, ring).map_err(|e| e.to_string())?;
            for i in 0..samples {
                let form = group.random_form(&mut rng, 1);
                let g = group.compose(&form).map_err(|e| e.to_string())?;
                let back = group.decompose(&g).map_err(|e| e.to_string())?;
                if back == form {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    if report.counterexamples.len() < 5 {
                        report.counterexamples.push(format!("form {i}"));
                    }
                }
            }
        }
        "mixed" => {
            let ty = ty.ok_or("--type is required for mixed")?;
            let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
            let ring = parse_field(field.ok_or("--field is required for mixed")?)?;
            let desc = if ring.is_pth_power_subfield() {
                return Err("pass the ambient field F<p>(t); k = F_p(t^p) is inferred".into());
            } else if ring.finite_data().is_some() {
                MixedGroupDescriptor::new(stype, mix(ring)).map_err(|e| e.to_string())?
            } else {
                MixedGroupDescriptor::function_field_instance(stype).map_err(|e| e.to_string())?
            };
            let mixed_report =
                verify_membership(&desc, samples, &mut rng, 4).map_err(|e| e.to_string())?;
            report.passed = mixed_report.forward_pass + mixed_report.converse_pass;
            report.failed = (mixed_report.forward_total - mixed_report.forward_pass)
                + (mixed_report.converse_total - mixed_report.converse_pass);
            report.details.insert(
                "forward".into(),
                format!(
                    "{}/{}",
                    mixed_report.forward_pass, mixed_report.forward_total
                ),
            );
            report.details.insert(
                "converse".into(),
                format!(
                    "{}/{}",
                    mixed_report.converse_pass, mixed_report.converse_total
                ),
            );
            report.counterexamples = mixed_report.counterexamples;
        }
        "torus-image" => {
            let ty = ty.ok_or("--type is required for torus-image")?;
            let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
            let desc =
                MixedGroupDescriptor::function_field_instance(stype).map_err(|e| e.to_string())?;
            for i in 0..samples {
                let values = (0..desc.group.system().rank())
                    .map(|_| desc.field.c2.sample_unit(&mut rng, 3))
                    .collect();
                let (lhs, rhs) =
                    desc.torus_membership_sides(&twistkit::chevalley::TorusElement { values });
                if lhs == rhs {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    if report.counterexamples.len() < 5 {
                        report.counterexamples.push(format!("torus sample {i}"));
                    }
                }
            }
        }
        "category" => {
            let checks = category_checks().map_err(|e| e.to_string())?;
            report.samples = checks.len();
            for (name, ok) in checks {
                if ok {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    report.counterexamples.push(name.clone());
                }
                report.details.insert(name, "checked".into());
            }
        }
        "descent" => {
            let cases = descent_cases().map_err(|e| e.to_string())?;
            report.samples = cases.len();
            for (name, ok) in cases {
                if ok {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    report.counterexamples.push(name.clone());
                }
                report.details.insert(name, "checked".into());
            }
        }
        other => return Err(format!("unknown property {other:?}")),
    }
    let ok = report.failed == 0;
    emit(
        common,
        &report,
        format!(
            "verify {}: {}/{} passed{}",
            report.prop,
            report.passed,
            report.passed + report.failed,
            if ok { "" } else { " (FAILED)" }
        ),
    );
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn ring_from_args(field: Option<&str>, q: Option<u64>) -> Result<RingRef, String> {
    match (field, q) {
        (Some(f), _) => parse_field(f),
        (None, Some(q)) => {
            let (p, h) =
                factor_prime_power(q).ok_or_else(|| format!("{q} is not a prime power"))?;
            Ring::finite_field(p, h, None).map_err(|e| e.to_string())
        }
        _ => Err("--field or --q is required".into()),
    }
}

fn category_checks() -> twistkit::Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    let objects = vec![
        TwistedRing::f_sqrt_p(2)?,
        TwistedRing::f_sqrt_p(3)?,
        TwistedRing::f_sqrt_q(2, 3)?,
        TwistedRing::f_sqrt_q(3, 3)?,
        twistmix::t_p(2)?,
        twistmix::t_p(3)?,
    ];
    for x in &objects {
        out.push((
            format!("twister-squared-is-frobenius {}", x.carrier),
            x.twister_defect().is_none(),
        ));
        let hat = twix(x);
        out.push((
            format!("tau-involution {}", x.carrier),
            tau(&tau(&hat)).equal(&hat),
        ));
        out.push((
            format!("twix-eq-tau-twix {}", x.carrier),
            tau(&hat).equal(&hat),
        ));
    }
    // mix is fully faithful on {F2, F3, F4, F8}.
    let rings = [
        Ring::finite_field(2, 1, None)?,
        Ring::finite_field(3, 1, None)?,
        Ring::finite_field(2, 2, None)?,
        Ring::finite_field(2, 3, None)?,
    ];
    let mut fully_faithful = true;
    for r in &rings {
        for s in &rings {
            let maps = RingMap::finite_embeddings(r.clone(), s.clone());
            for f in &maps {
                for g in &maps {
                    let is_morphism = check_mixed_morphism(
                        &MixedMorphism {
                            f1: f.clone(),
                            f2: g.clone(),
                        },
                        &mix(r.clone()),
                        &mix(s.clone()),
                    )?
                    .ok;
                    fully_faithful &= is_morphism == f.equal_pointwise(g, 0);
                }
            }
        }
    }
    out.push(("mix-fully-faithful".into(), fully_faithful));
    // twix is not full: the standard witness on twix(T_2).
    let t2 = twistmix::t_p(2)?;
    let hat = twix(&t2);
    let (l, r) = match t2.carrier.kind() {
        twistkit::fields::RingKind::Product(a, b) => (a.clone(), b.clone()),
        _ => unreachable!(),
    };
    let f1 = RingMap::product_map(
        t2.carrier.clone(),
        t2.carrier.clone(),
        (twistkit::maps::Side::Left, RingMap::identity(l.clone())),
        (twistkit::maps::Side::Left, RingMap::identity(l)),
    )?;
    let f2 = RingMap::product_map(
        t2.carrier.clone(),
        t2.carrier.clone(),
        (twistkit::maps::Side::Right, RingMap::identity(r.clone())),
        (twistkit::maps::Side::Right, RingMap::identity(r)),
    )?;
    let witness_is_morphism = check_mixed_morphism(
        &MixedMorphism {
            f1: f1.clone(),
            f2: f2.clone(),
        },
        &hat,
        &hat,
    )?
    .ok;
    out.push((
        "twix-not-full-witness".into(),
        witness_is_morphism && !f1.equal_pointwise(&f2, 0),
    ));
    out.push(("count-automorphisms-T2".into(), count_automorphisms(2)? == 2));
    out.push(("count-automorphisms-T3".into(), count_automorphisms(3)? == 2));
    // F_sqrt_p is initial: exactly one twisted morphism to each target.
    let targets = vec![
        TwistedRing::f_sqrt_q(2, 3)?,
        twistmix::t_p(2)?,
        twistmix::twist(Ring::rational_function(2)?)?,
    ];
    let counts = twistmix::verify_initial(2, &targets)?;
    out.push((
        "f-sqrt-p-is-initial".into(),
        counts.iter().all(|&c| c == 1),
    ));
    Ok(out)
}

fn descent_cases() -> twistkit::Result<Vec<(String, bool)>> {
    let mut out = Vec::new();
    // twix images descend and round-trip.
    for (stype, field) in [
        (SystemType::B(2), TwistedRing::f_sqrt_q(2, 3)?),
        (SystemType::G2, TwistedRing::f_sqrt_p(3)?),
    ] {
        let tw = TwistedGroupDescriptor::new(stype, field.clone())?;
        let mixed = base_change_group(&tw)?;
        let ok = match descent_check(stype, &mixed.field)? {
            DescentCheck::Descends { twisted_field, .. } => twisted_field.equal(&field),
            DescentCheck::Obstructed(_) => false,
        };
        out.push((format!("descends-twix {} {}", stype, field.carrier), ok));
    }
    // B3/C3: obstructed at the root-system level.
    let f2 = Ring::finite_field(2, 1, None)?;
    let b3 = descent_check(SystemType::B(3), &mix(f2))?;
    out.push(("obstructed-B3".into(), !b3.descends()));
    // (F2(t^2), F2(t)): obstructed with the witness t.
    let ff = MixedRing::function_field_mixed(2)?;
    let check = descent_check(SystemType::B(2), &ff)?;
    out.push((
        "obstructed-function-field".into(),
        !check.descends() && check.reason().is_some_and(|r| r.contains("not surjective")),
    ));
    Ok(out)
}

#[derive(Serialize)]
struct DescentReport {
    schema: &'static str,
    command: &'static str,
    group: String,
    mixed_field: twistkit::twistmix::MixedRingDescription,
    descends: bool,
    twisted_field: Option<twistkit::twistmix::TwistedRingDescription>,
    reason: Option<String>,
}

fn descent_cmd(ty: &str, field: &str, use_mix: bool, common: &Common) -> Result<ExitCode, String> {
    let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
    let ring = parse_field(field)?;
    let mixed = if let Some(fq) = ring.finite_data() {
        if use_mix {
            mix(ring.clone())
        } else {
            if fq.h % 2 == 0 {
                return Err(format!(
                    "F{} has no Tits endomorphism (even degree); use --mix for mix(F_q)",
                    ring
                ));
            }
            let tw = TwistedRing::f_sqrt_q(fq.p, fq.h).map_err(|e| e.to_string())?;
            twix(&tw)
        }
    } else {
        MixedRing::function_field_mixed(ring.characteristic()).map_err(|e| e.to_string())?
    };
    let outcome = descent_check(stype, &mixed).map_err(|e| e.to_string())?;
    let (descends, twisted_field, reason) = match outcome {
        DescentCheck::Descends { twisted_field, .. } => {
            (true, Some(twisted_field.describe()), None)
        }
        DescentCheck::Obstructed(r) => (false, None, Some(r)),
    };
    let report = DescentReport {
        schema: SCHEMA,
        command: "descent",
        group: stype.to_string(),
        mixed_field: mixed.describe(),
        descends,
        twisted_field,
        reason: reason.clone(),
    };
    emit(
        common,
        &report,
        match &reason {
            None => format!("{stype}: mixed data descends to a twisted form"),
            Some(r) => format!("{stype}: no twisted descent — {r}"),
        },
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SystemReport {
    schema: &'static str,
    command: &'static str,
    system: twistkit::rootsystem::RootSystemDescription,
    dual_type: String,
    weyl_order: usize,
    long_root_divisibility: bool,
    duality: Vec<DualityEntry>,
}

#[derive(Serialize)]
struct DualityEntry {
    root: String,
    dual: String,
    lambda: u64,
    lambda_dual: u64,
}

fn report_cmd(ty: &str, common: &Common) -> Result<ExitCode, String> {
    let stype = SystemType::parse(ty).map_err(|e| e.to_string())?;
    let rs = RootSystem::new(stype).map_err(|e| e.to_string())?;
    let duality = rs.duality().map_err(|e| e.to_string())?;
    let entries = (0..rs.num_roots())
        .map(|r| DualityEntry {
            root: root_label(&rs, r),
            dual: root_label(&duality.target, duality.map_root(r)),
            lambda: rs.lambda(r),
            lambda_dual: duality.target.lambda(duality.map_root(r)),
        })
        .collect();
    let report = SystemReport {
        schema: SCHEMA,
        command: "report",
        system: rs.describe(),
        dual_type: stype.dual().to_string(),
        weyl_order: rs.weyl_group().len(),
        long_root_divisibility: rs.long_root_divisibility(),
        duality: entries,
    };
    emit(
        common,
        &report,
        format!(
            "{stype}: {} roots ({} positive), |W| = {}, dual type {}",
            report.system.num_roots,
            report.system.num_positive,
            report.weyl_order,
            report.dual_type
        ),
    );
    Ok(ExitCode::SUCCESS)
}
