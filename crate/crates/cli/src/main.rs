use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sroiq_sigma::rewrite::equiv::{equiv_check, exhaustive_check, fixed_instances, EquivOptions};
use sroiq_sigma::rewrite::{normalize, MeasurePair, NormalizeOptions, DEFAULT_STEP_LIMIT};
use sroiq_sigma::search::DEFAULT_BUDGET;
use sroiq_sigma::{
    check_model, check_regular, check_simple_assertions, find_regular_order, parse_concept,
    parse_concept_unresolved, parse_signature_file, print_concept, sat_bounded, simple_roles,
    well_formed, Concept, Error, Interpretation, RBox, SatQuery, SearchMode, Signature, Variant,
    Verdict,
};

#[derive(Parser)]
#[command(name = "sroiqs", version, about = "SROIQ concepts with explicit substitutions")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a concept and print it canonically.
    Parse {
        #[command(flatten)]
        input: ConceptInput,
        /// Parse without resolving names against a signature.
        #[arg(long)]
        no_resolve: bool,
    },
    /// Eliminate all substitutions.
    Normalize {
        #[command(flatten)]
        input: ConceptInput,
        /// Print every rewrite step with its measures.
        #[arg(long)]
        trace: bool,
        #[arg(long, default_value_t = DEFAULT_STEP_LIMIT)]
        step_limit: usize,
    },
    /// Print the termination measure (M, M').
    Measure {
        #[command(flatten)]
        input: ConceptInput,
    },
    /// Evaluate a concept in an interpretation file.
    Eval {
        #[command(flatten)]
        input: ConceptInput,
        #[arg(long)]
        model: PathBuf,
    },
    /// Analyse the role box of a signature file.
    RboxCheck {
        #[arg(long)]
        sig: PathBuf,
        /// Also search for an order making the hierarchy regular.
        #[arg(long)]
        find_order: bool,
    },
    /// Differential test of one rewrite rule against the semantics.
    Equiv {
        #[arg(long)]
        rule: u8,
        #[arg(long, default_value_t = 300)]
        trials: usize,
        #[arg(long, default_value_t = 5)]
        max_domain: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "standard")]
        variant: Variant,
        /// Also check the fixed instances over every interpretation up to
        /// size 3 (rules 1-9 and 22).
        #[arg(long)]
        exhaustive: bool,
    },
    /// Bounded search for a finite model.
    Sat {
        #[command(flatten)]
        input: ConceptInput,
        #[arg(long, default_value_t = 3)]
        max_domain: usize,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        /// Required with `--mode random`.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        /// Require this individual to satisfy the concept.
        #[arg(long)]
        at: Option<String>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Normalize the concept first if it contains substitutions.
        #[arg(long)]
        normalize: bool,
    },
    /// Check a concept and the role box against an interpretation file.
    CheckModel {
        #[command(flatten)]
        input: ConceptInput,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        at: Option<String>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Random,
}

#[derive(Args)]
struct ConceptInput {
    /// Signature and role box declaration file.
    #[arg(long)]
    sig: Option<PathBuf>,
    /// The concept, inline.
    #[arg(long, conflicts_with = "concept_file", required_unless_present = "concept_file")]
    concept: Option<String>,
    /// A file holding the concept.
    #[arg(long)]
    concept_file: Option<PathBuf>,
}

/// What a command reports: a JSON value, its text rendering, and whether the
/// property it checks held.
struct Report {
    json: Value,
    text: String,
    ok: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, ok: true }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

impl ConceptInput {
    fn text(&self) -> Result<String, Error> {
        match (&self.concept, &self.concept_file) {
            (Some(c), _) => Ok(c.clone()),
            (None, Some(p)) => Ok(read(p)?.trim().to_string()),
            (None, None) => Err(Error::Precondition("no concept given".into())),
        }
    }

    fn signature(&self) -> Result<(Signature, RBox), Error> {
        let path = self
            .sig
            .as_ref()
            .ok_or_else(|| Error::Precondition("--sig is required for this command".into()))?;
        parse_signature_file(&read(path)?)
    }

    fn resolved(&self) -> Result<(Concept, Signature, RBox), Error> {
        let (sig, rbox) = self.signature()?;
        let c = parse_concept(&self.text()?, &sig)?;
        Ok((c, sig, rbox))
    }

    /// Resolved when a signature is given, unresolved otherwise.
    fn concept(&self) -> Result<Concept, Error> {
        if self.sig.is_some() {
            Ok(self.resolved()?.0)
        } else {
            parse_concept_unresolved(&self.text()?)
        }
    }
}

fn measure_json(m: MeasurePair) -> Value {
    json!({ "m": m.m, "mp": m.mp })
}

fn set_text(members: &[String]) -> String {
    format!("{{{}}}", members.join(", "))
}

fn load_model(path: &Path, sig: &Signature) -> Result<Interpretation, Error> {
    Interpretation::from_json_for(&read(path)?, sig)
}

fn run(cmd: &Command) -> Result<Report, Error> {
    match cmd {
        Command::Parse { input, no_resolve } => {
            if *no_resolve || input.sig.is_none() {
                if !*no_resolve {
                    return Err(Error::Precondition(
                        "--sig is required unless --no-resolve is given".into(),
                    ));
                }
                let c = parse_concept_unresolved(&input.text()?)?;
                let printed = print_concept(&c);
                return Ok(Report::ok(json!({ "concept": printed }), printed));
            }
            let (c, sig, rbox) = input.resolved()?;
            let printed = print_concept(&c);
            let violations: Vec<String> = well_formed(&c, &sig, &rbox).iter().map(ToString::to_string).collect();
            let mut text = printed.clone();
            for v in &violations {
                text += &format!("\nviolation: {v}");
            }
            Ok(Report {
                ok: violations.is_empty(),
                json: json!({ "concept": printed, "violations": violations }),
                text,
            })
        }
        Command::Normalize { input, trace, step_limit } => {
            let (c, sig, rbox) = input.resolved()?;
            if let Some(v) = well_formed(&c, &sig, &rbox).first() {
                return Err(Error::Precondition(format!("concept is not well formed: {v}")));
            }
            let out = normalize(
                &c,
                NormalizeOptions {
                    audit: true,
                    trace: *trace,
                    step_limit: *step_limit,
                },
            )?;
            let printed = print_concept(&out.concept);
            let mut text = printed.clone();
            let mut steps = Vec::new();
            if *trace {
                text += &format!("\nsteps: {}", out.step_count);
                for (k, s) in out.steps.iter().enumerate() {
                    let r = s.to_record();
                    text += &format!(
                        "\n{}. rule {} at {:?}: {} ~> {} ({} -> {})",
                        k + 1,
                        r.rule,
                        r.redex_path,
                        r.before,
                        r.after,
                        r.measure_before,
                        r.measure_after
                    );
                    steps.push(serde_json::to_value(r).expect("step record serializes"));
                }
            }
            let mut j = json!({ "normal_form": printed, "step_count": out.step_count });
            if *trace {
                j["steps"] = Value::Array(steps);
            }
            Ok(Report::ok(j, text))
        }
        Command::Measure { input } => {
            let m = MeasurePair::of(&input.concept()?);
            Ok(Report::ok(measure_json(m), m.to_string()))
        }
        Command::Eval { input, model } => {
            let (c, sig, _) = input.resolved()?;
            let i = load_model(model, &sig)?;
            let members = i.names_of(sroiq_sigma::eval_concept(&c, &i)?);
            Ok(Report::ok(
                json!({ "concept": print_concept(&c), "members": members }),
                set_text(&members),
            ))
        }
        Command::RboxCheck { sig, find_order } => rbox_check(sig, *find_order),
        Command::Equiv {
            rule,
            trials,
            max_domain,
            seed,
            variant,
            exhaustive,
        } => {
            let opts = EquivOptions {
                rule: *rule,
                trials: *trials,
                max_domain: *max_domain,
                seed: *seed,
                variant: *variant,
            };
            let rep = equiv_check(opts)?;
            let mut ok = rep.passed();
            let mut text = format!(
                "rule {rule} ({variant}): {} trials, max domain {max_domain}, seed {seed}: {} counterexamples",
                trials,
                rep.counterexamples.len()
            );
            let cex: Vec<Value> = rep
                .counterexamples
                .iter()
                .map(|c| {
                    json!({
                        "trial": c.trial,
                        "lhs": print_concept(&c.lhs),
                        "rhs": print_concept(&c.rhs),
                        "interpretation": c.interpretation.to_json_value(),
                        "lhs_value": c.lhs_value,
                        "rhs_value": c.rhs_value,
                    })
                })
                .collect();
            if let Some(first) = rep.counterexamples.first() {
                text += &format!(
                    "\nfirst counterexample (trial {}):\n  lhs {} = {}\n  rhs {} = {}\n  interpretation {}",
                    first.trial,
                    print_concept(&first.lhs),
                    set_text(&first.lhs_value),
                    print_concept(&first.rhs),
                    set_text(&first.rhs_value),
                    first.interpretation.to_json_value()
                );
            }
            let mut j = json!({
                "rule": rule,
                "variant": variant.name(),
                "trials": trials,
                "max_domain": max_domain,
                "seed": seed,
                "counterexamples": cex,
            });
            if *exhaustive {
                let instances = fixed_instances(*rule).ok_or_else(|| {
                    Error::Precondition(format!("no fixed instances for rule {rule}"))
                })?;
                let mut rows = Vec::new();
                for lhs in &instances {
                    let r = exhaustive_check(lhs, 3)?;
                    ok &= r.counterexample.is_none();
                    text += &format!(
                        "\nexhaustive {}: {} interpretations, {}",
                        print_concept(lhs),
                        r.interpretations,
                        if r.counterexample.is_none() { "equal" } else { "DIFFERENT" }
                    );
                    rows.push(json!({
                        "lhs": print_concept(lhs),
                        "interpretations": r.interpretations,
                        "counterexample": r.counterexample.map(|i| i.to_json_value()),
                    }));
                }
                j["exhaustive"] = Value::Array(rows);
            }
            Ok(Report { json: j, text, ok })
        }
        Command::Sat {
            input,
            max_domain,
            mode,
            seed,
            trials,
            at,
            budget,
            normalize: norm,
        } => {
            let (mut c, sig, rbox) = input.resolved()?;
            if *norm && !c.is_substitution_free() {
                c = normalize(&c, NormalizeOptions::default())?.concept;
            }
            let mode = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Random => SearchMode::Randomized {
                    seed: seed.ok_or_else(|| {
                        Error::Precondition("--seed is required with --mode random".into())
                    })?,
                    trials: *trials,
                },
            };
            let mut q = SatQuery::new(c, rbox, sig, *max_domain);
            q.mode = mode;
            q.at = at.clone();
            q.budget = *budget;
            let r = sat_bounded(&q)?;
            let stats = json!({
                "interpretations": r.stats.interpretations,
                "max_size_reached": r.stats.max_size_reached,
                "budget_exhausted": r.stats.budget_exhausted,
            });
            let stats_text = format!(
                "examined {} interpretations, sizes up to {}{}",
                r.stats.interpretations,
                r.stats.max_size_reached,
                if r.stats.budget_exhausted { ", budget exhausted" } else { "" }
            );
            Ok(match r.verdict {
                Verdict::Sat { witness, element } => {
                    let el = witness.element_name(element).to_string();
                    Report::ok(
                        json!({ "verdict": "SAT", "element": el, "witness": witness.to_json_value(), "stats": stats }),
                        format!("SAT at {el}\n{stats_text}\n{}", witness.to_json()),
                    )
                }
                Verdict::Unknown => Report {
                    ok: false,
                    json: json!({ "verdict": "UNKNOWN", "stats": stats }),
                    text: format!("UNKNOWN\n{stats_text}"),
                },
            })
        }
        Command::CheckModel { input, model, at } => {
            let (c, sig, rbox) = input.resolved()?;
            let i = load_model(model, &sig)?;
            let rep = check_model(&c, &i, &rbox, at.as_deref())?;
            let axioms: Vec<Value> = rep
                .rbox
                .inclusions
                .iter()
                .map(|(a, ok)| json!({ "axiom": a.to_string(), "satisfied": ok }))
                .chain(
                    rep.rbox
                        .assertions
                        .iter()
                        .map(|(a, ok)| json!({ "axiom": a.to_string(), "satisfied": ok })),
                )
                .collect();
            let mut text = format!("extension: {}\nnonempty: {}", set_text(&rep.members), rep.nonempty());
            if let Some((ind, hit)) = &rep.at {
                text += &format!("\n{ind} in extension: {hit}");
            }
            for a in &axioms {
                text += &format!(
                    "\naxiom {}: {}",
                    a["axiom"].as_str().unwrap_or_default(),
                    if a["satisfied"] == true { "holds" } else { "VIOLATED" }
                );
            }
            for issue in &rep.coherence {
                text += &format!("\ncoherence: {issue}");
            }
            text += &format!("\naccepted: {}", rep.accepted());
            Ok(Report {
                ok: rep.accepted(),
                json: json!({
                    "extension": rep.members,
                    "nonempty": rep.nonempty(),
                    "at": rep.at.as_ref().map(|(i, hit)| json!({ "individual": i, "member": hit })),
                    "axioms": axioms,
                    "coherence": rep.coherence,
                    "accepted": rep.accepted(),
                }),
                text,
            })
        }
    }
}

fn rbox_check(sig: &Path, find_order: bool) -> Result<Report, Error> {
    let (sig, rbox) = parse_signature_file(&read(sig)?)?;
    let reg = check_regular(&rbox)?;
    let simple = simple_roles(&rbox, &sig);
    let violations = check_simple_assertions(&rbox, &simple);
    let mut text = format!("regular: {}", reg.regular);
    let mut axioms = Vec::new();
    for a in &reg.per_axiom {
        let form = a.form.map_or("none".to_string(), |f| f.to_string());
        let missing: Vec<String> = a.missing.iter().map(|(s, r)| format!("{s} < {r}")).collect();
        text += &format!("\n  {}: {form}", a.axiom);
        if !missing.is_empty() {
            text += &format!(" (missing {})", missing.join(", "));
        }
        axioms.push(json!({ "axiom": a.axiom.to_string(), "form": form, "missing": missing }));
    }
    let simple_names: Vec<String> = simple.iter().map(ToString::to_string).collect();
    text += &format!("\nsimple roles: {}", simple_names.join(" "));
    let viol: Vec<String> = violations.iter().map(ToString::to_string).collect();
    text += &format!("\nassertion violations: {}", viol.len());
    for v in &viol {
        text += &format!("\n  {v}");
    }
    let mut j = json!({
        "regular": reg.regular,
        "axioms": axioms,
        "simple_roles": simple_names,
        "assertion_violations": viol,
    });
    if find_order {
        let found = find_regular_order(&rbox)?;
        let pairs: Option<Vec<String>> = found.map(|o| o.iter().map(|(s, r)| format!("{s} < {r}")).collect());
        text += &match &pairs {
            Some(p) => format!("\nregular order found: {}", p.join(", ")),
            None => "\nregular order found: none".to_string(),
        };
        j["regular_order"] = json!(pairs);
    }
    Ok(Report {
        ok: reg.regular && violations.is_empty(),
        json: j,
        text,
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(rep) => {
            let body = match cli.format {
                Format::Text => rep.text,
                Format::Json => serde_json::to_string_pretty(&rep.json).expect("json values serialize"),
            };
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{body}");
            ExitCode::from(if rep.ok { 0 } else { 1 })
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error[{}]: {e}", e.code()),
                Format::Json => {
                    let _ = writeln!(
                        std::io::stdout().lock(),
                        "{}",
                        json!({ "error": { "code": e.code(), "message": e.to_string() } })
                    );
                }
            }
            ExitCode::from(if e.is_internal() { 3 } else { 2 })
        }
    }
}
