//! `uhfree`: build, verify, classify and compare rank-2 module presentations.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use uhfree_core::emptiness::{
    emptiness_certificate, graded_emptiness, verify_certificate, CertificateFile,
};
use uhfree_core::format::{
    filtration_to_json, homs_to_json, params_to_json, presentation_from_json, presentation_to_json,
};
use uhfree_core::morphisms::{
    endo_span_matches, filtration, idempotent_scan, iso_test, sl11_submodule_shape, solve_hom_in,
    Category,
};
use uhfree_core::normalform::{classify_sl11, classify_sl_m1, CanonParams};
use uhfree_core::poly::{Poly, Rat};
use uhfree_core::presentation::{parity_check, verify_pointwise, verify_relations, Presentation};
use uhfree_core::stringbridge::{
    check_intertwining_module, string_act, Gen, StringModule,
};
use uhfree_core::Error;

const FIELD_NOTE: &str = "note: coefficients and parameters are interpreted over Q";

#[derive(Parser)]
#[command(name = "uhfree", version, about = "Rank-2 U(h)-free modules over sl(m|n)")]
struct Cli {
    /// Append a timestamp to human-readable reports.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the defining relations of one or more presentation files.
    Verify {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also apply every relation to monomial vectors up to this degree.
        #[arg(long)]
        pointwise_degree: Option<u32>,
    },
    /// Classify an sl(m|1) presentation as M(a, S) or its barred variant.
    Classify {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide whether two sl(m|1) presentations are isomorphic.
    Iso {
        src: PathBuf,
        dst: PathBuf,
        /// ungraded (M2), super (M11) or even (M0); defaults from the grading flags.
        #[arg(long)]
        category: Option<String>,
        /// Exit with status 1 unless an isomorphism exists.
        #[arg(long)]
        expect_iso: bool,
    },
    /// Solve for endomorphisms and list idempotents.
    Endo {
        file: PathBuf,
        #[arg(long, default_value_t = 4)]
        degree_bound: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The filtration by (X - l_1)...(X - l_k), or the J+J / J+hJ shapes over sl(1|1).
    Submodules {
        file: PathBuf,
        /// Comma-separated rationals.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        lambdas: Vec<String>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the identification of sl(1|1) modules with string modules.
    StringCheck {
        #[arg(long, default_value_t = 1)]
        variant: u8,
        #[arg(long, default_value_t = 25)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        max_deg: usize,
        /// Exchange the arrow labels (a negative control).
        #[arg(long)]
        swap_arrows: bool,
        /// Print the (u_i, generator, u_j) adjacency listing.
        #[arg(long)]
        listing: bool,
    },
    /// Produce or re-verify an emptiness certificate for m, n >= 2.
    EmptyCheck {
        #[arg(long, required_unless_present = "verify")]
        m: Option<usize>,
        #[arg(long, required_unless_present = "verify")]
        n: Option<usize>,
        #[arg(long)]
        graded: bool,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, conflicts_with_all = ["m", "n", "graded", "out"])]
        verify: Option<PathBuf>,
    },
    /// Canonical form of an sl(1|1) presentation and the conjugating matrix.
    CanonSl11 { file: PathBuf },
    /// Write the presentation M(a, S) (or its barred variant) over sl(m|1).
    BuildMas {
        /// Comma-separated nonzero rationals a_1..a_m.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        a: Vec<String>,
        /// Comma-separated indices in 1..m.
        #[arg(long, value_delimiter = ',')]
        s: Vec<usize>,
        #[arg(long)]
        bar: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// `Ok(true)` is a passing verdict, `Ok(false)` a failing one.
type Verdict = anyhow::Result<bool>;

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Presentation> {
    presentation_from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn write_out(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn parse_rats(items: &[String]) -> anyhow::Result<Vec<Rat>> {
    items
        .iter()
        .map(|s| {
            s.trim()
                .parse::<Rat>()
                .map_err(|e| anyhow::anyhow!("bad rational '{s}': {e}"))
        })
        .collect()
}

fn stamp_line() -> String {
    format!(
        "generated {}\n",
        humantime::format_rfc3339_seconds(std::time::SystemTime::now())
    )
}

fn verify_one(path: &Path, pointwise: Option<u32>) -> (String, anyhow::Result<bool>) {
    let mut out = String::new();
    let p = match load(path) {
        Ok(p) => p,
        Err(e) => return (out, Err(e)),
    };
    let vars = p.vars();
    let verdict = verify_relations(&p);
    let mut ok = verdict.passed();
    if !verdict.missing.is_empty() {
        let names: Vec<String> = verdict.missing.iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "  missing generators: {}", names.join(", "));
    }
    for f in verdict.failures.iter().take(5) {
        let _ = writeln!(out, "  {}", f.describe(&vars));
    }
    if verdict.failures.len() > 5 {
        let _ = writeln!(out, "  ... {} more", verdict.failures.len() - 5);
    }
    if p.grading.is_graded() {
        match parity_check(&p) {
            Ok(pv) => {
                for v in &pv.violations {
                    let _ = writeln!(out, "  grading: {v}");
                }
                ok &= pv.passed();
            }
            Err(e) => return (out, Err(e.into())),
        }
    }
    if let (Some(d), true) = (pointwise, verdict.missing.is_empty()) {
        match verify_pointwise(&p, d) {
            Ok(bad) => {
                if !bad.is_empty() {
                    let _ = writeln!(out, "  pointwise: {} failing (x, y, v) triples", bad.len());
                }
                ok &= bad.is_empty();
            }
            Err(e) => return (out, Err(e.into())),
        }
    }
    let head = format!(
        "{}: {} sl({}|{}) {}, {} relations checked\n",
        path.display(),
        if ok { "PASS" } else { "FAIL" },
        p.m,
        p.n,
        p.grading,
        verdict.checked
    );
    (head + &out, Ok(ok))
}

fn cmd_verify(files: &[PathBuf], pointwise: Option<u32>, report: &mut String) -> Verdict {
    // each file is checked on its own thread and reported in argument order
    let results: Vec<(String, anyhow::Result<bool>)> = std::thread::scope(|scope| {
        let handles: Vec<_> = files
            .iter()
            .map(|f| scope.spawn(move || verify_one(f, pointwise)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("verifier thread")).collect()
    });
    let mut all = true;
    let mut first_err = None;
    for (path, (text, res)) in files.iter().zip(results) {
        report.push_str(&text);
        match res {
            Ok(ok) => all &= ok,
            Err(e) => {
                report.push_str(&format!("{}: ERROR {e:#}\n", path.display()));
                first_err.get_or_insert(e);
            }
        }
    }
    match first_err {
        Some(e) => Err(e),
        None => Ok(all),
    }
}

fn cmd_classify(file: &Path, out: Option<&Path>, report: &mut String) -> Verdict {
    let p = load(file)?;
    let c = classify_sl_m1(&p)?;
    let json = params_to_json(&c.params);
    report.push_str(&json);
    report.push('\n');
    if let Some(path) = out {
        write_out(path, &(json + "\n"))?;
    }
    Ok(true)
}

fn cmd_iso(src: &Path, dst: &Path, category: Option<&str>, expect: bool, report: &mut String) -> Verdict {
    let (ps, pd) = (load(src)?, load(dst)?);
    let cat = match category {
        Some(c) => Category::parse(c)?,
        None if ps.grading.is_graded() && pd.grading.is_graded() => Category::Super,
        None => Category::Ungraded,
    };
    let vars = ps.vars();
    match iso_test(&ps, &pd, cat)? {
        Some(iso) => {
            let _ = writeln!(report, "isomorphic in {}: gamma = {}", cat.as_str(), iso.gamma);
            let _ = writeln!(report, "witness ({}): {}", if iso.parity.is_odd() { "odd" } else { "even" }, iso.witness.display(&vars));
            Ok(true)
        }
        None => {
            let _ = writeln!(report, "not isomorphic in {}", cat.as_str());
            Ok(!expect)
        }
    }
}

fn cmd_endo(file: &Path, bound: u32, out: Option<&Path>, report: &mut String) -> Verdict {
    let p = load(file)?;
    let vars = p.vars();
    let cat = if p.grading.is_graded() { Category::Super } else { Category::Ungraded };
    let sols = solve_hom_in(&p, &p, bound, cat)?;
    let _ = writeln!(report, "{} independent endomorphisms with entries of degree <= {bound}", sols.len());
    for s in &sols {
        let _ = writeln!(report, "  {} ({})", s.w.display(&vars), s.parity.as_str());
    }
    let mut ok = true;
    if p.n == 1 {
        let matches = endo_span_matches(&p, bound)?;
        let _ = writeln!(
            report,
            "span equals diag(F(c+m-1), F(c)): {}",
            if matches { "yes" } else { "no" }
        );
        let ids = idempotent_scan(&p, bound)?;
        let _ = writeln!(report, "idempotents: {}", ids.iter().map(|w| w.display(&vars)).collect::<Vec<_>>().join(", "));
        ok = matches && ids.len() == 2;
    }
    if let Some(path) = out {
        write_out(path, &(homs_to_json(&sols, &vars) + "\n"))?;
    }
    Ok(ok)
}

fn cmd_submodules(
    file: &Path,
    lambdas: &[String],
    k: Option<usize>,
    out: Option<&Path>,
    report: &mut String,
) -> Verdict {
    let p = load(file)?;
    let lambdas = parse_rats(lambdas)?;
    let k = k.unwrap_or(lambdas.len());
    if k > lambdas.len() {
        bail!("--k {k} needs at least {k} values in --lambdas");
    }
    let vars = p.vars();
    if (p.m, p.n) == (1, 1) {
        let (class, _) = classify_sl11(&p)?;
        let x = Poly::var(1, 0);
        let mut gen = Poly::one(1);
        for l in &lambdas[..k] {
            gen = &gen * &(&x - &Poly::constant(1, l.clone()));
        }
        let _ = writeln!(report, "sl(1|1) module of {class}; J = ({})C[h]", vars.format(&gen));
        let mut ok = true;
        for sh in sl11_submodule_shape(class, &gen)? {
            let closed = sh.closed_under(class)?;
            ok &= closed;
            let _ = writeln!(
                report,
                "  ({})C[h] + ({})C[h]: {}",
                vars.format(&sh.first),
                vars.format(&sh.second),
                if closed { "submodule" } else { "NOT closed" }
            );
        }
        return Ok(ok);
    }
    let f = filtration(&p, &lambdas, k)?;
    let x = uhfree_core::poly::Vars::new(1, 1);
    for (r, step) in f.steps.iter().enumerate() {
        let fx = x.format(&step.f).replace("h1", "X");
        match f.separators.get(r) {
            Some(v) => {
                let _ = writeln!(
                    report,
                    "M_{r}: F = {fx}; separator ({}, {})",
                    vars.format(&v.f[0]),
                    vars.format(&v.f[1])
                );
            }
            None => {
                let _ = writeln!(report, "M_{r}: F = {fx}");
            }
        }
    }
    if let Some(path) = out {
        write_out(path, &(filtration_to_json(&f, &vars) + "\n"))?;
    }
    Ok(true)
}

fn cmd_string(variant: u8, n: usize, max_deg: usize, swap: bool, listing: bool, report: &mut String) -> Verdict {
    let mut s = StringModule::new(variant, n)?;
    if swap {
        s = s.swapped();
    }
    if listing {
        for i in 1..=n {
            for g in Gen::ALL {
                let v = string_act(&s, g, i)?;
                for j in v.terms.keys() {
                    let _ = writeln!(report, "(u{i}, {g}, u{j})");
                }
            }
        }
    }
    let v = check_intertwining_module(&s, max_deg)?;
    let _ = writeln!(
        report,
        "variant {variant}{}, N = {n}, max_deg = {max_deg}: {} ({} checks)",
        if swap { " with swapped arrows" } else { "" },
        if v.passed() { "PASS" } else { "FAIL" },
        v.checked
    );
    if let Some(f) = v.failures.first() {
        let _ = writeln!(report, "  first failure: {} at u{}", f.gen, f.index);
    }
    Ok(v.passed())
}

fn cmd_empty(
    m: Option<usize>,
    n: Option<usize>,
    graded: bool,
    out: Option<&Path>,
    verify: Option<&Path>,
    report: &mut String,
) -> Verdict {
    if let Some(path) = verify {
        let file: CertificateFile = serde_json::from_str(&read(path)?)
            .map_err(|e| Error::Format(e.to_string()))
            .with_context(|| format!("in {}", path.display()))?;
        let check = verify_certificate(&file)?;
        let _ = writeln!(
            report,
            "{}: {} ({} branches)",
            path.display(),
            if check.passed() { "certificate verified" } else { "certificate REJECTED" },
            check.branches
        );
        for p in &check.problems {
            let _ = writeln!(report, "  {p}");
        }
        return Ok(check.passed());
    }
    let (m, n) = (m.expect("clap enforces --m"), n.expect("clap enforces --n"));
    let cert = if graded {
        graded_emptiness(m, n)?
    } else {
        emptiness_certificate(m, n)?
    };
    report.push_str(&cert.report());
    if let Some(path) = out {
        write_out(path, &(cert.to_json() + "\n"))?;
    }
    Ok(cert.rechecked && cert.pairs_checked && cert.canon_demo.passed)
}

fn cmd_canon(file: &Path, report: &mut String) -> Verdict {
    let p = load(file)?;
    let vars = p.vars();
    let (class, w) = classify_sl11(&p)?;
    let (e, f) = class.pair();
    let _ = writeln!(report, "{class}: E[1,b1] = {}, E[b1,1] = {}", e.display(&vars), f.display(&vars));
    let _ = writeln!(report, "conjugating matrix W = {}", w.display(&vars));
    Ok(true)
}

fn cmd_build(a: &[String], s: &[usize], bar: bool, out: Option<&Path>, report: &mut String) -> Verdict {
    let params = CanonParams {
        a: parse_rats(a)?,
        s: s.iter().copied().collect::<BTreeSet<_>>(),
        bar,
    };
    let p = params.build()?;
    let json = presentation_to_json(&p);
    match out {
        Some(path) => write_out(path, &json)?,
        None => report.push_str(&json),
    }
    Ok(true)
}

fn run(cli: &Cli, report: &mut String, notes: &mut Vec<&'static str>) -> Verdict {
    match &cli.command {
        Command::Verify { files, pointwise_degree } => cmd_verify(files, *pointwise_degree, report),
        Command::Classify { file, out } => {
            notes.push(FIELD_NOTE);
            cmd_classify(file, out.as_deref(), report)
        }
        Command::Iso { src, dst, category, expect_iso } => {
            notes.push(FIELD_NOTE);
            cmd_iso(src, dst, category.as_deref(), *expect_iso, report)
        }
        Command::Endo { file, degree_bound, out } => {
            notes.push(FIELD_NOTE);
            cmd_endo(file, *degree_bound, out.as_deref(), report)
        }
        Command::Submodules { file, lambdas, k, out } => {
            notes.push(FIELD_NOTE);
            cmd_submodules(file, lambdas, *k, out.as_deref(), report)
        }
        Command::StringCheck { variant, n, max_deg, swap_arrows, listing } => {
            cmd_string(*variant, *n, *max_deg, *swap_arrows, *listing, report)
        }
        Command::EmptyCheck { m, n, graded, out, verify } => {
            cmd_empty(*m, *n, *graded, out.as_deref(), verify.as_deref(), report)
        }
        Command::CanonSl11 { file } => {
            notes.push(FIELD_NOTE);
            cmd_canon(file, report)
        }
        Command::BuildMas { a, s, bar, out } => {
            notes.push(FIELD_NOTE);
            cmd_build(a, s, *bar, out.as_deref(), report)
        }
    }
}

/// Inputs that parse but fail the relations are a failing verdict, not a usage error.
fn is_verdict_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Unverified(_))))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut report = String::new();
    let mut notes = Vec::new();
    let result = run(&cli, &mut report, &mut notes);
    for n in notes {
        eprintln!("{n}");
    }
    let human = !matches!(cli.command, Command::Classify { .. } | Command::BuildMas { out: None, .. });
    if cli.stamp && human {
        report.push_str(&stamp_line());
    }
    print!("{report}");
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if is_verdict_error(&e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
