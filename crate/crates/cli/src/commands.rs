use std::fmt::Write as _;
use std::time::Instant;

use detpol_core::corpus::{fill_expected, parse_corpus, run_corpus, CLASSES};
use detpol_core::covering::{
    decide_covering, decide_separation, extract_separator, Certification, CoverVerdict, CoveringReport,
    Tower,
};
use detpol_core::equiv::canonical_equiv;
use detpol_core::lang::{compile_over, parse_regex, Alphabet, Dfa};
use detpol_core::logic::{ef_leq, EfQuery};
use detpol_core::membership::membership_report;
use detpol_core::prevariety::{canonical_morphism, parse_class, Base, PolOp};
use detpol_core::syntactic::{syntactic_morphism, MonoidMorphism};
use detpol_core::words::{class_as_product, classify_product, MarkedProduct, Mode, ProductFlags};
use detpol_core::Config;
use serde_json::json;
use thiserror::Error;

use crate::report::{Report, Verdict};
use crate::{Cli, Command, Global};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] detpol_core::Error),
    #[error(transparent)]
    Lang(#[from] detpol_core::lang::LangError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("config: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
}

type Result<T> = std::result::Result<T, CliError>;

fn config(g: &Global) -> Result<Config> {
    let mut cfg = match &g.config {
        Some(p) => serde_json::from_str(&std::fs::read_to_string(p)?)?,
        None => Config::default(),
    };
    if let Some(v) = g.cap {
        cfg.cap = v;
    }
    if let Some(v) = g.k_max {
        cfg.k_max = v;
    }
    if let Some(v) = g.ptk {
        cfg.ptk = v;
    }
    if let Some(v) = g.word_length {
        cfg.word_length = v;
    }
    Ok(cfg)
}

/// Alphabet from the flag, or the letters of the given expressions.
fn alphabet(g: &Global, regexes: &[&str]) -> Result<Alphabet> {
    if let Some(a) = &g.alphabet {
        return Ok(Alphabet::parse(a)?);
    }
    let mut letters = std::collections::BTreeSet::new();
    for r in regexes {
        letters.extend(parse_regex(r)?.letters());
    }
    if letters.is_empty() {
        return Err(CliError::Usage("no letters in the expressions; pass --alphabet".into()));
    }
    Ok(Alphabet::new(letters))
}

fn lang(r: &str, a: &Alphabet) -> Result<Dfa> {
    Ok(compile_over(&parse_regex(r)?, a)?)
}

/// Plain output text and the JSON report for one command.
struct Outcome {
    text: String,
    report: Report,
}

pub fn run(cli: &Cli, argv: Vec<String>) -> Result<u8> {
    let cfg = config(&cli.global)?;
    let start = Instant::now();
    let mut out = Outcome {
        text: String::new(),
        report: Report::new(argv, cfg.clone()),
    };
    let code = execute(cli, &cfg, &mut out)?;
    out.report.elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    if !cli.global.quiet {
        if cli.global.json {
            println!("{}", serde_json::to_string(&out.report)?);
        } else {
            print!("{}", out.text);
        }
    }
    Ok(match (cli.global.quiet, code) {
        (true, c) => c,
        (false, c) if matches!(cli.command, Command::Corpus { .. }) => c,
        _ => 0,
    })
}

fn set_verdict(out: &mut Outcome, v: Verdict, cert: Option<Certification>) -> u8 {
    out.report.verdict = Some(v);
    out.report.certification = cert;
    v.exit_code()
}

fn covering_verdict(rep: &CoveringReport) -> Verdict {
    match rep.verdict {
        CoverVerdict::Coverable => Verdict::True,
        CoverVerdict::NotCoverable => Verdict::False,
        CoverVerdict::Unknown => Verdict::Unknown,
    }
}

fn execute(cli: &Cli, cfg: &Config, out: &mut Outcome) -> Result<u8> {
    let g = &cli.global;
    match &cli.command {
        Command::Syntactic { regex } => {
            let a = alphabet(g, &[regex])?;
            let syn = syntactic_morphism(&lang(regex, &a)?);
            let alpha = &syn.morphism;
            let m = alpha.named_target();
            let names = alpha.element_names();
            let show = |xs: &[usize]| xs.iter().map(|&x| names[x].as_str()).collect::<Vec<_>>().join(", ");
            let green = m.green();
            let t = &mut out.text;
            t.push_str(&m.to_dump());
            for (label, classes) in [
                ("R", green.r_classes()),
                ("L", green.l_classes()),
                ("J", green.j_classes()),
                ("H", green.h_classes()),
            ] {
                let cs: Vec<String> = classes.iter().map(|c| format!("{{{}}}", show(c))).collect();
                writeln!(t, "{label}-classes {}", cs.join(" ")).unwrap();
            }
            writeln!(t, "idempotents {}", show(&m.idempotents())).unwrap();
            writeln!(t, "omega {}", m.omega()).unwrap();
            writeln!(t, "accepting {}", show(&syn.accepting())).unwrap();
            for a in 0..alpha.alphabet().len() {
                let c = alpha.alphabet().letters()[a] as char;
                writeln!(t, "letter {c} -> {}", names[alpha.letter_image(a)]).unwrap();
            }
            out.report.details = json!({
                "size": m.size(),
                "dump": m.to_dump(),
                "names": names,
                "omega": m.omega(),
                "accepting": syn.accepting(),
                "j_trivial": green.is_j_trivial(),
            });
            Ok(0)
        }
        Command::Member { class, regex, witness } => {
            let e = parse_class(class)?;
            let a = alphabet(g, &[regex])?;
            let rep = membership_report(&e, &lang(regex, &a)?, cfg)?;
            writeln!(out.text, "{}", rep.member).unwrap();
            if *witness {
                if let Some(f) = rep.failure.as_ref().and_then(|f| f.violation.as_ref().map(|v| (f.op, v))) {
                    let syn = syntactic_morphism(&lang(regex, &a)?);
                    let names = syn.morphism.element_names();
                    let (op, v) = f;
                    let mut line = format!("violation {} s={} t={}", op.name(), names[v.s], names[v.t]);
                    for (tag, x) in [("q", v.q), ("r", v.r)] {
                        if let Some(x) = x {
                            write!(line, " {tag}={}", names[x]).unwrap();
                        }
                    }
                    write!(line, " lhs={} rhs={}", names[v.lhs], names[v.rhs]).unwrap();
                    writeln!(out.text, "{line}").unwrap();
                    out.report.witnesses.push(line);
                }
            }
            out.report.details = serde_json::to_value(&rep)?;
            Ok(set_verdict(out, Verdict::of(rep.member), Some(Certification::Exact)))
        }
        Command::Equiv { class, regex } => {
            let e = parse_class(class)?;
            let a = alphabet(g, &[regex])?;
            let alpha = syntactic_morphism(&lang(regex, &a)?).morphism;
            let c = canonical_equiv(&e, &alpha, cfg)?;
            let names = alpha.element_names();
            let blocks: Vec<Vec<&str>> = c
                .blocks()
                .iter()
                .map(|b| b.iter().map(|&x| names[x].as_str()).collect())
                .collect();
            for b in &blocks {
                writeln!(out.text, "{{{}}}", b.join(", ")).unwrap();
            }
            out.report.details = json!({ "class": e.to_string(), "blocks": blocks });
            out.report.certification = Some(Certification::Exact);
            Ok(0)
        }
        Command::Separate { class, left, right, witness } => {
            let e = parse_class(class)?;
            let a = alphabet(g, &[left, right])?;
            let (l1, l2) = (lang(left, &a)?, lang(right, &a)?);
            let rep = decide_separation(&e, &l1, &l2, cfg)?;
            let v = covering_verdict(&rep);
            writeln!(out.text, "{}", v.as_str()).unwrap();
            writeln!(out.text, "certification {}", cert_name(rep.certification)).unwrap();
            if let Some(k) = rep.ptk {
                writeln!(out.text, "approximated by PTK({k})").unwrap();
            }
            if *witness && v == Verdict::True {
                match separator(&e, &l1, &l2, cfg)? {
                    Some((k, mode, regexes)) => {
                        writeln!(out.text, "separator k={k} mode={mode}").unwrap();
                        for r in regexes {
                            writeln!(out.text, "  {r}").unwrap();
                            out.report.witnesses.push(r);
                        }
                    }
                    None => writeln!(out.text, "no separator found within the configured bounds").unwrap(),
                }
            }
            out.report.details = serde_json::to_value(&rep)?;
            Ok(set_verdict(out, v, Some(rep.certification)))
        }
        Command::Cover { class, target, against } => {
            let e = parse_class(class)?;
            let mut all: Vec<&str> = vec![target];
            all.extend(against.iter().map(String::as_str));
            let a = alphabet(g, &all)?;
            let l0 = lang(target, &a)?;
            let ls = against.iter().map(|r| lang(r, &a)).collect::<Result<Vec<_>>>()?;
            let rep = decide_covering(&e, &l0, &ls, cfg)?;
            let v = covering_verdict(&rep);
            writeln!(out.text, "{}", v.as_str()).unwrap();
            writeln!(out.text, "certification {}", cert_name(rep.certification)).unwrap();
            if let Some(o) = &rep.obstruction {
                writeln!(out.text, "obstruction {o}").unwrap();
            }
            out.report.details = serde_json::to_value(&rep)?;
            Ok(set_verdict(out, v, Some(rep.certification)))
        }
        Command::ClassifyProduct { parts } => {
            let toks: Vec<&str> = parts.split_whitespace().collect();
            if toks.len().is_multiple_of(2) {
                return Err(CliError::Usage("expected `R0 a1 R1 ... an Rn`".into()));
            }
            let a = alphabet(g, &toks)?;
            let mut dfas = Vec::new();
            let mut letters = Vec::new();
            for (i, t) in toks.iter().enumerate() {
                if i % 2 == 0 {
                    dfas.push(lang(t, &a)?);
                } else if t.len() == 1 && a.contains(t.as_bytes()[0]) {
                    letters.push(t.as_bytes()[0]);
                } else {
                    return Err(CliError::Usage(format!("`{t}` is not a letter of the alphabet")));
                }
            }
            let p = MarkedProduct::new(dfas, letters)?;
            let flags = classify_product(&p);
            write_flags(&mut out.text, &flags);
            out.report.details = serde_json::to_value(flags)?;
            out.report.certification = Some(Certification::Exact);
            Ok(0)
        }
        Command::WordClass { class_morphism, regex, k, mode, word } => {
            let mode: Mode = mode.parse()?;
            let w = if word == "%" { Vec::new() } else { word.as_bytes().to_vec() };
            let eta: MonoidMorphism = match regex {
                Some(r) => {
                    let a = alphabet(g, &[r, word])?;
                    syntactic_morphism(&lang(r, &a)?).morphism
                }
                None => {
                    let a = alphabet(g, &[word])?;
                    let base = parse_class(class_morphism)?
                        .as_base()
                        .filter(|b| b.is_finite())
                        .ok_or_else(|| CliError::Usage("class morphism must be ST, AT or PTK(k)".into()))?;
                    canonical_morphism(base, &a)?
                }
            };
            let p = class_as_product(&eta, *k, mode, &w)?;
            let flags = classify_product(&p);
            let r = p.to_regex_string();
            writeln!(out.text, "{r}").unwrap();
            write_flags(&mut out.text, &flags);
            out.report.witnesses.push(r);
            out.report.details = json!({ "k": k, "mode": mode.to_string(), "flags": flags });
            out.report.certification = Some(Certification::Exact);
            Ok(0)
        }
        Command::Ef { k, n, left, right, left_pos, right_pos, eta } => {
            let word = |s: &str| if s == "%" { Vec::new() } else { s.as_bytes().to_vec() };
            let (u, v) = (word(left), word(right));
            let a = match &g.alphabet {
                Some(a) => Alphabet::parse(a)?,
                None => {
                    let letters: std::collections::BTreeSet<u8> = u.iter().chain(&v).copied().collect();
                    if letters.is_empty() {
                        Alphabet::parse("a")?
                    } else {
                        Alphabet::new(letters)
                    }
                }
            };
            let eta = match eta.as_str() {
                "trivial" => MonoidMorphism::trivial(&a),
                "at" | "AT" => canonical_morphism(Base::At, &a)?,
                other => return Err(CliError::Usage(format!("unknown eta `{other}`; use trivial or at"))),
            };
            let q = EfQuery { eta: &eta, k: *k, n: *n, left: (&u, *left_pos), right: (&v, *right_pos) };
            let leq = ef_leq(&q)?;
            let geq = ef_leq(&EfQuery { left: q.right, right: q.left, ..q })?;
            writeln!(out.text, "{leq}").unwrap();
            writeln!(out.text, "reverse {geq}").unwrap();
            writeln!(out.text, "equivalent {}", leq && geq).unwrap();
            out.report.details = json!({ "leq": leq, "geq": geq, "equivalent": leq && geq });
            Ok(set_verdict(out, Verdict::of(leq), Some(Certification::Exact)))
        }
        Command::Corpus { file, fill } => {
            let text = std::fs::read_to_string(file)?;
            if *fill {
                let filled = fill_expected(&text, cfg)?;
                std::fs::write(file, &filled)?;
            }
            let fixtures = parse_corpus(&std::fs::read_to_string(file)?)?;
            let summary = run_corpus(&fixtures, cfg);
            let t = &mut out.text;
            writeln!(t, "classes {}", CLASSES.join(" ")).unwrap();
            for r in &summary.results {
                let row: String = CLASSES
                    .iter()
                    .map(|c| match r.verdicts.get(*c) {
                        Some(true) => 'T',
                        Some(false) => 'F',
                        None => '?',
                    })
                    .collect();
                let status = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(t, "{status} {row} {}", r.id).unwrap();
            }
            writeln!(t, "{}/{} fixtures passed", summary.passed, summary.fixtures).unwrap();
            for r in summary.results.iter().filter(|r| !r.passed()) {
                for f in &r.failures {
                    eprintln!("FAIL {}: {f}", r.id);
                }
            }
            out.report.details = serde_json::to_value(&summary)?;
            Ok(set_verdict(out, Verdict::of(summary.ok()), Some(Certification::Exact)))
        }
    }
}

fn cert_name(c: Certification) -> &'static str {
    match c {
        Certification::Exact => "exact",
        Certification::ApproxSound => "approx-sound",
    }
}

fn write_flags(t: &mut String, f: &ProductFlags) {
    writeln!(t, "left-deterministic {}", f.left_det).unwrap();
    writeln!(t, "right-deterministic {}", f.right_det).unwrap();
    writeln!(t, "mixed-deterministic {}", f.mixed_det).unwrap();
    writeln!(t, "unambiguous {}", f.unambiguous).unwrap();
}

/// Separator for single-operator towers over a finite base, or a union of
/// base classes for a bare base.
fn separator(
    e: &detpol_core::prevariety::ClassExpr,
    l1: &Dfa,
    l2: &Dfa,
    cfg: &Config,
) -> Result<Option<(usize, Mode, Vec<String>)>> {
    let Ok(tower) = Tower::of(e) else { return Ok(None) };
    if !tower.base.is_finite() {
        return Ok(None);
    }
    let (mode, cfg) = match tower.ops.as_slice() {
        [] => (Mode::Left, Config { k_max: 0, ..cfg.clone() }),
        [PolOp::L] => (Mode::Left, cfg.clone()),
        [PolOp::R] => (Mode::Right, cfg.clone()),
        [PolOp::M] => (Mode::Mixed, cfg.clone()),
        _ => return Ok(None),
    };
    Ok(extract_separator(mode, tower.base, l1, l2, &cfg)?.map(|c| {
        let mut r = c.regexes();
        if r.is_empty() {
            r.push("@".into());
        }
        (c.k, c.mode, r)
    }))
}
