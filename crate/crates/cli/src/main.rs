//! `phopf`: validate linking data, count PBW bases, reduce expressions and
//! run the identity checks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use pointed_hopf::cocycle::{
    cocycle_suite, deformation_suite, deformed_structure_suite, descent_suite, fif_suite, tau_property_suite,
    SplitAlgebras,
};
use pointed_hopf::datum::{expected_dimension, load_datum, validate_datum, validate_gamma, Instance};
use pointed_hopf::hopf::{
    antipode_recursion_suite, central_suite, commutation_suite, delroot_suite, hopf_axioms_suite,
    hopf_ideal_suite, normal_form_suite, CommutationSelector, Presentation,
};
use pointed_hopf::ncalg::{build_rules, enumerate_basis, parse_element, BasisError, Flavor, SmashContext};
use pointed_hopf::par::Execution;
use pointed_hopf::report::{Outcome, Report};

const USAGE_EXIT: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "phopf", version, about = "Exact PBW rewriting and identity checks for pointed Hopf algebras")]
struct Cli {
    /// Linking datum file (TOML).
    #[arg(long, global = true)]
    datum: Option<PathBuf>,
    /// u = u(D), U = U(D), A = A(D, γ).
    #[arg(long, global = true, default_value = "A", value_parser = parse_flavor)]
    flavor: FlavorArg,
    /// Degree bound for completion.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    /// Largest basis that will be enumerated.
    #[arg(long, global = true, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    cap: u64,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Samples per sampled property.
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Vertex `i0` for the twist (1-based).
    #[arg(long, global = true, default_value_t = 1)]
    i0: usize,
    /// Component to split at (1-based); all components if omitted.
    #[arg(long, global = true)]
    component: Option<usize>,
    /// Print per-check timings.
    #[arg(long, global = true)]
    timing: bool,
    /// Run on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum FlavorArg {
    Small,
    Enveloping,
    Lifted,
}

fn parse_flavor(s: &str) -> Result<FlavorArg, String> {
    match s {
        "u" => Ok(FlavorArg::Small),
        "U" => Ok(FlavorArg::Enveloping),
        "A" => Ok(FlavorArg::Lifted),
        _ => Err(format!("unknown flavor {s:?} (expected u, U or A)")),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Tree,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check the datum and root parameters.
    Validate,
    /// Size of the PBW basis, compared with the expected dimension.
    Dim,
    /// List the PBW basis.
    Basis,
    /// Normal form of an expression.
    Reduce { expr: String },
    /// Run identity checks.
    Verify {
        #[arg(value_enum)]
        selector: Selector,
    },
    /// Show the split of the datum at a component.
    Split,
    /// The linking relation produced by the cocycle deformation.
    Deform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Selector {
    HopfIdeal,
    Delroot,
    Crucial,
    Techcom,
    Cocycle,
    Descent,
    Fif,
    Central,
    Structure,
    All,
}

/// Failure before any report exists.
struct Usage(String);

impl Cli {
    fn flavor(&self) -> Flavor {
        match self.flavor {
            FlavorArg::Small => Flavor::Small,
            FlavorArg::Enveloping => Flavor::Enveloping,
            FlavorArg::Lifted => Flavor::Lifted,
        }
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn bound(&self) -> usize {
        self.bound as usize
    }

    fn instance(&self) -> Result<(String, Instance), Usage> {
        let path = self.datum.as_ref().ok_or_else(|| Usage("--datum <path> is required".into()))?;
        let inst = load_datum(path).map_err(|e| Usage(e.to_string()))?;
        Ok((path.display().to_string(), inst))
    }

    /// Components to split at, 0-based.
    fn components(&self, inst: &Instance) -> Result<Vec<usize>, Usage> {
        let t = inst.datum.cartan().num_components();
        if t < 2 {
            return Err(Usage("splitting needs at least two components".into()));
        }
        match self.component {
            Some(k) if k == 0 || k > t => Err(Usage(format!("--component must be in 1..={t}"))),
            Some(k) => Ok(vec![k - 1]),
            None => Ok((0..t).collect()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(mut report) => {
            if !cli.timing {
                for s in &mut report.suites {
                    for c in &mut s.checks {
                        c.millis = 0.0;
                    }
                }
            }
            match cli.format {
                Format::Text => print!("{}", report.to_text(cli.timing)),
                Format::Tree => println!("{}", report.to_json()),
            }
            ExitCode::from(report.outcome.exit_code() as u8)
        }
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(USAGE_EXIT)
        }
    }
}

fn run(cli: &Cli) -> Result<Report, Usage> {
    let (name, inst) = cli.instance()?;
    let d = &inst.datum;
    let command = match &cli.command {
        Command::Validate => "validate".to_string(),
        Command::Dim => format!("dim ({})", cli.flavor().name()),
        Command::Basis => format!("basis ({})", cli.flavor().name()),
        Command::Reduce { .. } => format!("reduce ({})", cli.flavor().name()),
        Command::Verify { selector } => format!("verify {}", selector_name(*selector)),
        Command::Split => "split".to_string(),
        Command::Deform => "deform".to_string(),
    };
    let mut report = Report::new(command, name);
    match &cli.command {
        Command::Validate => validate(&inst, &mut report),
        Command::Dim => dim(cli, &inst, &mut report, false)?,
        Command::Basis => dim(cli, &inst, &mut report, true)?,
        Command::Reduce { expr } => {
            let rs = build_rules(d, &inst.gamma, &cli.flavor(), cli.bound()).map_err(|e| Usage(e.to_string()))?;
            let x = parse_element(rs.ctx(), expr).map_err(|e| Usage(e.to_string()))?;
            let r = rs.normal_form(&x);
            report.line(r.element.to_string());
            if r.provisional {
                report.line(format!("provisional: rewrite system is {}", rs.status()));
                report.set_outcome(Outcome::Inconclusive);
            }
        }
        Command::Verify { selector } => verify(cli, &inst, *selector, &mut report)?,
        Command::Split => split(cli, &inst, &mut report)?,
        Command::Deform => {
            for k in cli.components(&inst)? {
                let alg = SplitAlgebras::new(d, k).map_err(|e| Usage(e.to_string()))?;
                let mut s = deformation_suite(&alg);
                s.name = format!("deformation (I = component {})", k + 1);
                report.push_suite(s);
            }
        }
    }
    Ok(report)
}

fn selector_name(s: Selector) -> String {
    s.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn validate(inst: &Instance, report: &mut Report) {
    let d = &inst.datum;
    let mut violations = validate_datum(d).violations;
    violations.extend(validate_gamma(d, &inst.gamma).violations);
    if violations.is_empty() {
        let n: Vec<String> = (0..d.cartan().num_components()).map(|k| d.component_order(k).to_string()).collect();
        report.line(format!("valid; N=[{}]; expected dimension {}", n.join(", "), expected_dimension(d)));
    } else {
        for v in &violations {
            report.line(format!("violation: {v}"));
        }
        report.line(format!("invalid: {} violations", violations.len()));
        report.set_outcome(Outcome::Fail);
    }
}

fn dim(cli: &Cli, inst: &Instance, report: &mut Report, list: bool) -> Result<(), Usage> {
    let d = &inst.datum;
    let rs = match build_rules(d, &inst.gamma, &cli.flavor(), cli.bound()) {
        Ok(rs) => rs,
        Err(e) => {
            report.line(format!("completion failed: {e}"));
            report.set_outcome(Outcome::Fail);
            return Ok(());
        }
    };
    report.line(format!("rewrite system: {} rules, {}", rs.rules().len(), rs.status()));
    match enumerate_basis(&rs, cli.cap as u128) {
        Ok(b) => {
            let expected = expected_dimension(d);
            let count = b.count();
            if list {
                let ctx = rs.ctx();
                for m in b.monomials() {
                    let body = ctx.monomial_body(&m);
                    report.line(if body.is_empty() { "1".to_string() } else { body });
                }
            }
            let flavor_has_expected = cli.flavor != FlavorArg::Enveloping;
            if !flavor_has_expected || count == expected {
                report.line(format!("dimension {count}{}", if flavor_has_expected { ", matches" } else { "" }));
            } else {
                report.line(format!("dimension {count} DOES NOT MATCH expected {expected}"));
                report.set_outcome(Outcome::Fail);
            }
            if b.provisional {
                report.line(format!("provisional: rewrite system is {}", rs.status()));
                report.set_outcome(report.outcome.combine(Outcome::Inconclusive));
            }
        }
        Err(e @ BasisError::Infinite { .. }) => {
            report.line(e.to_string());
            report.set_outcome(Outcome::Fail);
        }
        Err(e @ BasisError::CapExceeded { .. }) => {
            report.line(e.to_string());
            report.set_outcome(Outcome::Inconclusive);
        }
    }
    Ok(())
}

fn split(cli: &Cli, inst: &Instance, report: &mut Report) -> Result<(), Usage> {
    for k in cli.components(inst)? {
        let alg = SplitAlgebras::new(&inst.datum, k).map_err(|e| Usage(e.to_string()))?;
        let s = alg.split();
        let one_based = |v: &[usize]| v.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(", ");
        report.line(format!("component {}: I = [{}], complement [{}]", k + 1, one_based(&s.part_vertices), one_based(&s.rest_vertices)));
        let orders: Vec<String> = s.part.group().orders().iter().map(|o| format!("Z_{o}")).collect();
        report.line(format!("  Υ = {}", orders.join(" ⊕ ")));
        for (j, &v) in s.part_vertices.iter().enumerate() {
            report.line(format!("  z{} ↦ g{} = {}, η{} = {}", v + 1, v + 1, s.part_g[j], v + 1, s.part.chi(j)));
        }
        for ((j, l), lam) in &s.cross {
            report.line(format!("  λ({},{}) = {lam}", s.part_vertices[*j] + 1, s.rest_vertices[*l] + 1));
        }
    }
    Ok(())
}

fn verify(cli: &Cli, inst: &Instance, selector: Selector, report: &mut Report) -> Result<(), Usage> {
    use Selector::*;
    let (d, gamma) = (&inst.datum, &inst.gamma);
    let (bound, exec, seed, samples) = (cli.bound(), cli.exec(), cli.seed, cli.samples);
    let all = selector == All;
    let want = |s: Selector| all || selector == s;
    let err = |e: &dyn std::fmt::Display| Usage(e.to_string());

    if want(HopfIdeal) {
        report.push_suite(hopf_ideal_suite(d, gamma, cli.flavor(), bound, exec).map_err(|e| err(&e))?);
    }
    if want(Delroot) {
        report.push_suite(delroot_suite(d, gamma, None, bound, exec).map_err(|e| err(&e))?);
        report.push_suite(antipode_recursion_suite(d, gamma, bound, exec).map_err(|e| err(&e))?);
    }
    if want(Crucial) {
        report.push_suite(commutation_suite(d, CommutationSelector::Crucial, None, bound, exec).map_err(|e| err(&e))?);
    }
    if want(Techcom) {
        report.push_suite(commutation_suite(d, CommutationSelector::Techcom, None, bound, exec).map_err(|e| err(&e))?);
    }
    if want(Central) {
        report.push_suite(central_suite(d, gamma).map_err(|e| err(&e))?);
    }
    let split_ok = d.cartan().num_components() >= 2;
    if (want(Cocycle) || want(Descent)) && (split_ok || !all) {
        report.seed = Some(seed);
        for k in cli.components(inst)? {
            let alg = SplitAlgebras::new(d, k).map_err(|e| err(&e))?;
            let tag = |mut s: pointed_hopf::report::Suite| {
                s.name = format!("{} (I = component {})", s.name, k + 1);
                s
            };
            if want(Cocycle) {
                report.push_suite(tag(tau_property_suite(&alg, seed, samples)));
                report.push_suite(tag(cocycle_suite(&alg, seed, samples, exec)));
                report.push_suite(tag(deformed_structure_suite(&alg, seed, samples, exec)));
            }
            if want(Descent) {
                report.push_suite(tag(descent_suite(&alg, seed, samples)));
            }
        }
    } else if want(Cocycle) || want(Descent) {
        report.line("cocycle and descent skipped: the datum has one component");
    }
    if want(Fif) {
        if cli.i0 == 0 || cli.i0 > d.rank() {
            return Err(Usage(format!("--i0 must be in 1..={}", d.rank())));
        }
        report.push_suite(fif_suite(d, gamma, cli.i0 - 1, bound, exec).map_err(|e| err(&e))?);
    }
    if want(Structure) {
        report.seed = Some(seed);
        let ctx = SmashContext::from_datum(d);
        report.push_suite(hopf_axioms_suite(&ctx, seed, samples, exec));
        let p = Presentation::new(d, gamma, cli.flavor(), bound).map_err(|e| err(&e))?;
        report.push_suite(normal_form_suite(&p, seed, samples, bound.min(8), exec));
    }
    Ok(())
}
