//! Command-line front end for the sccheck toolkit.
//!
//! Exit status: 0 when the command decided its question (and, for `verify`,
//! every row matched), 1 when a verification row mismatched or an internal
//! consistency law was violated, 2 on input errors, 3 when a search was
//! refused because it exceeds the state bound.

mod suites;

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};

use sccheck::axioms::{self, Axiom};
use sccheck::extension::{self, ExtensionRule};
use sccheck::info::{at_least_as_informative, InfoFamily, InfoKind, InfoProfileSpec};
use sccheck::manip::{decide_manipulability, SearchConfig, Verdict};
use sccheck::prefs::Profile;
use sccheck::scc::{self, AltSet, SccRule};
use sccheck::Error;

#[derive(Parser)]
#[command(
    name = "sccheck",
    version,
    about = "Exhaustive manipulability and strategy-proofness checks for social choice correspondences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Worker threads for cache builds and searches.
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Hard bound on the full-profile space (n!)^m.
    #[arg(long, visible_alias = "max-nm", default_value_t = 10_000_000)]
    max_states: u64,
    /// Make stdout byte-identical across runs (timings print as 0).
    #[arg(long)]
    deterministic: bool,
    /// Also print each witness as JSON.
    #[arg(long)]
    emit_witness: bool,
}

impl Common {
    fn search_config(&self) -> SearchConfig {
        SearchConfig {
            max_states: self.max_states,
            workers: self.workers.max(1),
        }
    }

    fn millis(&self, millis: u64) -> u64 {
        if self.deterministic {
            0
        } else {
            millis
        }
    }
}

#[derive(Args)]
struct RuleArgs {
    /// Rule specifier: borda, plurality, negative-plurality, copeland,
    /// majority:a, positional:w1,w2,...
    #[arg(long)]
    scc: String,
    /// Threshold for the majority rule (alternative to majority:a).
    #[arg(long)]
    alpha: Option<String>,
    /// Weights for a positional rule (alternative to positional:...).
    #[arg(long)]
    weights: Option<String>,
}

impl RuleArgs {
    fn resolve(&self) -> sccheck::Result<SccRule> {
        match (self.scc.as_str(), &self.alpha, &self.weights) {
            ("majority", Some(alpha), _) => format!("majority:{alpha}").parse(),
            ("positional", _, Some(weights)) => format!("positional:{weights}").parse(),
            _ => self.scc.parse(),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a rule on a profile and print the winner set.
    Eval {
        #[command(flatten)]
        rule: RuleArgs,
        /// Profile text, e.g. "3 1 2;3 1 2;2 1 3".
        profile: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compare two sets of alternatives under an extension rule.
    Compare {
        /// Extension rule: kelly or fishburn.
        #[arg(long)]
        ext: String,
        /// The comparing order, e.g. "1 2 3".
        #[arg(long)]
        order: String,
        /// First set, e.g. "1 2".
        #[arg(long)]
        b: String,
        /// Second set.
        #[arg(long)]
        c: String,
    },
    /// Decide manipulability of a rule at (n, m).
    Manip {
        #[command(flatten)]
        rule: RuleArgs,
        /// Extension rule: kelly or fishburn.
        #[arg(long)]
        ext: String,
        /// Information family: complete, zero, or winner. Omit for the
        /// full-information definition.
        #[arg(long)]
        info: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Check a structural axiom: wsm, sm, us, unanimity, or exclusions.
    Axiom {
        /// Axiom name.
        axiom: String,
        #[command(flatten)]
        rule: RuleArgs,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Decide whether one information family is at least as informative as
    /// another.
    Informativeness {
        /// The finer family: complete, zero, or winner.
        #[arg(long)]
        a: String,
        /// The coarser family.
        #[arg(long)]
        b: String,
        /// Rule backing winner families.
        #[arg(long)]
        scc: Option<String>,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Run a named verification suite: paper, kelly-properties, or axioms.
    Verify {
        #[arg(long)]
        suite: String,
        /// Flag rows slower than this many milliseconds as mismatches.
        #[arg(long)]
        budget_millis: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BoundExceeded { .. } => 3,
                Error::Inconsistent(_) => 1,
                _ => 2,
            }
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> sccheck::Result<i32> {
    match cli.command {
        Command::Eval {
            rule,
            profile,
            common,
        } => cmd_eval(&rule.resolve()?, &profile, &common),
        Command::Compare { ext, order, b, c } => cmd_compare(&ext, &order, &b, &c),
        Command::Manip {
            rule,
            ext,
            info,
            n,
            m,
            common,
        } => cmd_manip(&rule.resolve()?, &ext, info.as_deref(), n, m, &common),
        Command::Axiom {
            axiom,
            rule,
            n,
            m,
            common,
        } => cmd_axiom(&axiom, &rule.resolve()?, n, m, &common),
        Command::Informativeness {
            a,
            b,
            scc,
            n,
            m,
            common,
        } => cmd_informativeness(&a, &b, scc.as_deref(), n, m, &common),
        Command::Verify {
            suite,
            budget_millis,
            common,
        } => cmd_verify(&suite, budget_millis, &common),
    }
}

fn cmd_eval(rule: &SccRule, profile: &str, common: &Common) -> sccheck::Result<i32> {
    let profile: Profile = profile.parse()?;
    let winners = scc::winners(rule, &profile)?;
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({ "rule": rule.to_string(), "winners": ids(winners) })
        ),
        _ => println!("{winners}"),
    }
    Ok(0)
}

fn cmd_compare(ext: &str, order: &str, b: &str, c: &str) -> sccheck::Result<i32> {
    let ext: ExtensionRule = ext.parse()?;
    let order: sccheck::prefs::LinearOrder = order.parse()?;
    let b: AltSet = b.parse()?;
    let c: AltSet = c.parse()?;
    let forward = extension::succeq(ext, &order, b, c)?;
    let backward = extension::succeq(ext, &order, c, b)?;
    let relation = match (forward, backward) {
        (true, true) => "weak-equal",
        (true, false) => "strict",
        (false, true) => "reverse",
        (false, false) => "incomparable",
    };
    println!("{relation}");
    Ok(0)
}

fn resolve_info(kind: Option<&str>, rule: &SccRule) -> sccheck::Result<Option<InfoProfileSpec>> {
    Ok(match kind {
        None | Some("none") => None,
        Some(text) => Some(match text.parse::<InfoKind>()? {
            InfoKind::Complete => InfoProfileSpec::Complete,
            InfoKind::Zero => InfoProfileSpec::Zero,
            InfoKind::Winner => InfoProfileSpec::Winner(rule.clone()),
        }),
    })
}

fn cmd_manip(
    rule: &SccRule,
    ext: &str,
    info: Option<&str>,
    n: usize,
    m: usize,
    common: &Common,
) -> sccheck::Result<i32> {
    let ext: ExtensionRule = ext.parse()?;
    let spec = resolve_info(info, rule)?;
    let verdict = decide_manipulability(rule, ext, spec.as_ref(), n, m, &common.search_config())?;
    let verdict_word = if verdict.holds {
        "manipulable"
    } else {
        "strategy-proof"
    };
    match common.format {
        Format::Json => {
            let witness = witness_json(&verdict);
            println!(
                "{}",
                serde_json::json!({
                    "rule": rule.to_string(),
                    "ext": ext.to_string(),
                    "info": info_label(&spec),
                    "n": n,
                    "m": m,
                    "verdict": verdict_word,
                    "witness": witness,
                    "states": verdict.stats.states,
                    "millis": common.millis(verdict.stats.millis),
                })
            );
        }
        _ => {
            println!("verdict: {verdict_word}");
            println!("rule: {rule}");
            println!("extension: {ext}");
            println!(
                "information: {}",
                info_label(&spec)
                    .map(|s| s.to_string())
                    .unwrap_or_else(|| "full".into())
            );
            println!("n: {n}");
            println!("m: {m}");
            println!("states: {}", verdict.stats.states);
            println!("millis: {}", common.millis(verdict.stats.millis));
            if !verdict.holds {
                // No succinct certificate exists for a negative verdict;
                // report the exhausted count against the configured bound.
                println!(
                    "certificate: exhausted {} states (bound {})",
                    verdict.stats.states, common.max_states
                );
            }
            if let Some(witness) = &verdict.witness {
                println!("witness:");
                println!("  individual: {}", witness.individual);
                println!("  sincere: {}", witness.sincere);
                println!("  misreport: {}", witness.misreport);
                if let Some(tag) = &witness.info {
                    match &tag.outcome {
                        Some(outcome) => {
                            println!("  information: {} outcome {{{outcome}}}", tag.kind)
                        }
                        None => println!("  information: {}", tag.kind),
                    }
                }
                println!("  gain_at: {}", witness.gain_at);
                println!("  outcome_sincere: {{{}}}", witness.outcome_sincere);
                println!("  outcome_misreport: {{{}}}", witness.outcome_misreport);
                if common.emit_witness {
                    println!(
                        "witness_json: {}",
                        serde_json::to_string(witness).expect("witness serialises")
                    );
                }
            }
        }
    }
    Ok(0)
}

fn info_label(spec: &Option<InfoProfileSpec>) -> Option<String> {
    spec.as_ref().map(|s| s.kind().to_string())
}

fn witness_json(verdict: &Verdict) -> serde_json::Value {
    verdict
        .witness
        .as_ref()
        .map(|w| serde_json::to_value(w).expect("witness serialises"))
        .unwrap_or(serde_json::Value::Null)
}

fn ids(set: AltSet) -> Vec<u8> {
    set.members().iter().map(|a| a.id()).collect()
}

fn cmd_axiom(
    axiom: &str,
    rule: &SccRule,
    n: usize,
    m: usize,
    common: &Common,
) -> sccheck::Result<i32> {
    let config = common.search_config();
    if axiom == "exclusions" {
        let report = axioms::check_exclusions(rule, n, m, &config)?;
        match common.format {
            Format::Json => {
                let laws: Vec<_> = report
                    .checks()
                    .iter()
                    .map(|(law, ok)| serde_json::json!({ "law": law, "ok": ok }))
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "rule": rule.to_string(),
                        "n": n,
                        "m": m,
                        "wsm": report.wsm.holds,
                        "sm": report.sm.holds,
                        "us": report.us.holds,
                        "winner_information_manipulable": report.manipulation.holds,
                        "laws": laws,
                        "consistent": report.consistent(),
                    })
                );
            }
            _ => {
                println!("rule: {rule}");
                println!("wsm: {}", verdict_word(report.wsm.holds));
                println!("sm: {}", verdict_word(report.sm.holds));
                println!("us: {}", verdict_word(report.us.holds));
                println!(
                    "winner-information manipulability: {}",
                    if report.manipulation.holds {
                        "manipulable"
                    } else {
                        "strategy-proof"
                    }
                );
                for (law, ok) in report.checks() {
                    println!("law: {law}: {}", if ok { "ok" } else { "VIOLATED" });
                }
            }
        }
        return Ok(0);
    }

    let axiom: Axiom = axiom.parse()?;
    let report = match axiom {
        Axiom::Wsm => axioms::check_wsm(rule, n, m, &config)?,
        Axiom::Sm => axioms::check_sm(rule, n, m, &config)?,
        Axiom::Us => axioms::check_us(rule, n, m, &config)?,
        Axiom::Unanimity => axioms::check_unanimity(rule, n, m, &config)?,
    };
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "axiom": axiom.to_string(),
                "rule": rule.to_string(),
                "n": n,
                "m": m,
                "holds": report.holds,
                "evidence": report.evidence.as_ref().map(|e| e.to_string()),
            })
        ),
        _ => {
            println!("axiom: {axiom}");
            println!("rule: {rule}");
            println!("n: {n}");
            println!("m: {m}");
            println!("holds: {}", report.holds);
            if let Some(evidence) = &report.evidence {
                println!("evidence: {evidence}");
            }
        }
    }
    Ok(0)
}

fn verdict_word(holds: bool) -> &'static str {
    if holds {
        "holds"
    } else {
        "fails"
    }
}

fn cmd_informativeness(
    a: &str,
    b: &str,
    rule: Option<&str>,
    n: usize,
    m: usize,
    common: &Common,
) -> sccheck::Result<i32> {
    let rule: Option<SccRule> = rule.map(|r| r.parse()).transpose()?;
    let family = |kind: &str| -> sccheck::Result<InfoFamily> {
        let spec = match kind.parse::<InfoKind>()? {
            InfoKind::Complete => InfoProfileSpec::Complete,
            InfoKind::Zero => InfoProfileSpec::Zero,
            InfoKind::Winner => InfoProfileSpec::Winner(rule.clone().ok_or_else(|| {
                Error::Input("winner information needs --scc".into())
            })?),
        };
        InfoFamily::new(spec, n, m, common.max_states, common.workers.max(1))
    };
    let verdict = at_least_as_informative(&family(a)?, &family(b)?)?;
    match common.format {
        Format::Json => println!(
            "{}",
            serde_json::json!({
                "a": a,
                "b": b,
                "n": n,
                "m": m,
                "holds": verdict.holds,
                "counterexample": verdict.counterexample.as_ref().map(|(i, q, cell)| {
                    serde_json::json!({
                        "individual": i,
                        "sincere": q.to_string(),
                        "cell": cell.to_string(),
                    })
                }),
            })
        ),
        _ => {
            println!("{} >= {}: {}", a, b, verdict_word(verdict.holds));
            if let Some((i, q, cell)) = &verdict.counterexample {
                println!("counterexample: individual {i}, sincere [{q}], cell {cell}");
            }
        }
    }
    Ok(0)
}

fn cmd_verify(suite: &str, budget_millis: Option<u64>, common: &Common) -> sccheck::Result<i32> {
    let config = common.search_config();
    let mut rows = match suite {
        "paper" => {
            let cases = suites::load_paper_suite()?;
            suites::check_suite_bound(&cases, config.max_states)?;
            cases
                .iter()
                .map(|case| suites::run_paper_case(case, &config))
                .collect::<sccheck::Result<Vec<_>>>()?
        }
        "kelly-properties" => suites::run_kelly_properties()?,
        "axioms" => suites::run_axiom_suite(&config)?,
        other => {
            return Err(Error::Input(format!(
                "unknown suite {other:?}; expected paper, kelly-properties, or axioms"
            )))
        }
    };
    if let Some(budget) = budget_millis {
        for row in &mut rows {
            if row.millis > budget {
                row.observed = format!("over-budget({}ms)", row.millis);
            }
        }
    }

    let failures = rows.iter().filter(|r| !r.matches()).count();
    match common.format {
        Format::Csv => {
            let mut out = String::new();
            out.push_str("rule,ext,info,n,m,expected,observed,states,millis\n");
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                writer
                    .write_record([
                        row.rule.as_str(),
                        row.ext.as_str(),
                        row.info.as_str(),
                        row.n.as_str(),
                        row.m.as_str(),
                        row.expected.as_str(),
                        row.observed.as_str(),
                        &row.states.to_string(),
                        &common.millis(row.millis).to_string(),
                    ])
                    .expect("csv row");
            }
            let body = writer.into_inner().expect("csv buffer");
            out.push_str(&String::from_utf8(body).expect("csv is utf-8"));
            print!("{out}");
        }
        Format::Json => {
            let rows_json: Vec<_> = rows
                .iter()
                .map(|row| {
                    let mut object = serde_json::json!({
                        "rule": row.rule,
                        "ext": row.ext,
                        "info": row.info,
                        "n": row.n,
                        "m": row.m,
                        "expected": row.expected,
                        "observed": row.observed,
                        "states": row.states,
                        "millis": common.millis(row.millis),
                    });
                    if common.emit_witness {
                        if let Some(w) = &row.witness_json {
                            object["witness"] =
                                serde_json::from_str(w).expect("stored witness is valid JSON");
                        }
                    }
                    object
                })
                .collect();
            println!(
                "{}",
                serde_json::json!({
                    "suite": suite,
                    "rows": rows_json,
                    "passed": rows.len() - failures,
                    "failed": failures,
                })
            );
        }
        Format::Text => {
            for row in &rows {
                let mut line = String::new();
                let status = if row.matches() { "PASS" } else { "FAIL" };
                write!(
                    line,
                    "{status} {} ext={} info={} n={} m={} expected={} observed={} states={} millis={}",
                    row.rule,
                    blank(&row.ext),
                    blank(&row.info),
                    blank(&row.n),
                    blank(&row.m),
                    row.expected,
                    row.observed,
                    row.states,
                    common.millis(row.millis),
                )
                .expect("write to string");
                if !row.claim.is_empty() {
                    write!(line, " claim={}", row.claim).expect("write to string");
                }
                println!("{line}");
                if common.emit_witness {
                    if let Some(w) = &row.witness_json {
                        println!("  witness_json: {w}");
                    }
                }
            }
            println!(
                "suite {suite}: {}/{} rows match",
                rows.len() - failures,
                rows.len()
            );
        }
    }
    Ok(if failures == 0 { 0 } else { 1 })
}

fn blank(s: &str) -> &str {
    if s.is_empty() {
        "-"
    } else {
        s
    }
}
