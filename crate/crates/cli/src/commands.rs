use std::fs;
use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use sunflower_core::basesets::{
    audit_remark_g, base_sets, process_r, Constants, GCollection, TraceRecord,
};
use sunflower_core::experiment::{verify_bound_experiment, ExperimentReport};
use sunflower_core::extremal::build_extremal;
use sunflower_core::family::{restrict, SetFamily};
use sunflower_core::gamma::{check_gamma, check_gamma_on_subsplit};
use sunflower_core::io::{family_to_json, family_to_text, parse_family, parse_split, split_to_text};
use sunflower_core::random::generate_random_family;
use sunflower_core::split_search::{
    find_good_split, pad_universe, transversal_count_brute, transversal_formula, SearchMode,
};
use sunflower_core::sunflower::{extract_disjoint_via_gamma, find_sunflower_exact, SunflowerCertificate};
use sunflower_core::{Budget, Error, GammaBase, GroundSet, Result, Split, Subsplit};

use crate::{exit, Command, Format, Mode};

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        Error::InvalidArgument(format!("cannot read {}: {e}", path.display()))
    })
}

fn read_family(path: &Path) -> Result<SetFamily> {
    parse_family(&read(path)?)
}

fn read_split(path: &Path) -> Result<Split> {
    parse_split(&read(path)?)
}

fn render(family: &SetFamily, format: Format) -> String {
    match format {
        Format::Text => family_to_text(family),
        Format::Json => family_to_json(family) + "\n",
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print_report(report: &ExperimentReport) -> Result<()> {
    emit(&(serde_json::to_string_pretty(report)? + "\n"))
}

fn write_trace(path: Option<&Path>, records: &[TraceRecord]) -> Result<()> {
    let Some(path) = path else { return Ok(()) };
    let mut file = fs::File::create(path)?;
    for r in records {
        writeln!(file, "{}", serde_json::to_string(r)?)?;
    }
    Ok(())
}

/// Prints the family, or writes it to `out` and prints the report.
fn emit_family(family: &SetFamily, format: Format, out: Option<&Path>, report: ExperimentReport) -> Result<u8> {
    match out {
        None => emit(&render(family, format))?,
        Some(path) => {
            fs::write(path, render(family, format))?;
            print_report(&report)?;
        }
    }
    Ok(exit::OK)
}

/// `3`, `2,3,5` or `2..4` (inclusive).
pub fn parse_range(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot parse range `{spec}`"));
    if let Some((a, b)) = spec.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    spec.split(',').map(|s| s.trim().parse().map_err(|_| bad())).collect()
}

fn certificate_json(cert: &Option<SunflowerCertificate>) -> Value {
    cert.as_ref().map_or(Value::Null, |c| serde_json::to_value(c).expect("certificate serializes"))
}

pub fn run(command: Command, trace: Option<&Path>) -> Result<u8> {
    let budget = Budget::from_env()?;
    match command {
        Command::GenExtremal { k, m, format, out } => {
            let mut report = ExperimentReport::new("gen-extremal", None).input("k", k).input("m", m);
            let ef = report.timed("build", || build_extremal(k, m, &budget))?;
            report.results = json!({ "size": ef.family.len(), "n": ef.family.universe().size() });
            emit_family(&ef.family, format, out.as_deref(), report)
        }

        Command::GenRandom {
            n,
            m,
            size,
            seed,
            split,
            format,
            out,
        } => {
            let split = split.as_deref().map(read_split).transpose()?;
            let mut report = ExperimentReport::new("gen-random", Some(seed))
                .input("n", n)
                .input("m", m)
                .input("size", size)
                .input("split", split.as_ref().map(Split::to_label_lists));
            let family = report.timed("generate", || generate_random_family(n, m, size, seed, split.as_ref()))?;
            report.results = json!({ "size": family.len() });
            emit_family(&family, format, out.as_deref(), report)
        }

        Command::FindSunflower {
            input,
            k,
            exact: _,
            gamma,
            restrict: core_labels,
        } => {
            let family = read_family(&input)?;
            let mut report = ExperimentReport::new("find-sunflower", None)
                .input("input", input.display().to_string())
                .input("k", k)
                .input("gamma", &gamma)
                .input("restrict", &core_labels);
            match gamma {
                None => {
                    let cert = report.timed("search", || find_sunflower_exact(&family, k, &budget))?;
                    let found = cert.is_some();
                    report.results = json!({
                        "method": "exact",
                        "found": found,
                        "certificate": certificate_json(&cert),
                    });
                    print_report(&report)?;
                    Ok(if found { exit::OK } else { exit::ABSENT })
                }
                Some(b) => {
                    let b = GammaBase::parse(&b)?;
                    let core = GroundSet::from_labels(family.universe(), core_labels.unwrap_or_default())?;
                    let residuals = SetFamily::collect(
                        family.universe(),
                        restrict(&family, &core)?.iter().map(|u| u.difference(&core)),
                    )?;
                    if residuals.is_empty() {
                        return Err(Error::InvalidArgument(format!("no member contains {core}")));
                    }
                    let cert = report.timed("extract", || extract_disjoint_via_gamma(&residuals, k, &b, &budget))?;
                    let cert = cert.map(|c| SunflowerCertificate {
                        petals: c.petals.iter().map(|p| p.union(&core)).collect(),
                        core: core.clone(),
                    });
                    let found = cert.is_some();
                    report.results = json!({
                        "method": "gamma",
                        "found": found,
                        "certificate": certificate_json(&cert),
                    });
                    print_report(&report)?;
                    // A stalled greedy pass proves nothing.
                    Ok(if found { exit::OK } else { exit::OTHER })
                }
            }
        }

        Command::CheckGamma {
            input,
            b,
            split,
            strips,
            over,
        } => {
            let family = read_family(&input)?;
            let base = GammaBase::parse(&b)?;
            let mut report = ExperimentReport::new("check-gamma", None)
                .input("input", input.display().to_string())
                .input("b", &b)
                .input("strips", &strips);
            let result = match split {
                None => report.timed("check", || check_gamma(&family, &base, &budget))?,
                Some(path) => {
                    let split = Arc::new(read_split(&path)?);
                    let sub = match strips {
                        Some(idx) => Subsplit::from_arc(split, idx)?,
                        None => Subsplit::full_arc(split),
                    };
                    let over = match over {
                        Some(p) => read_family(&p)?,
                        None => family.clone(),
                    };
                    report.timed("check", || check_gamma_on_subsplit(&family, &sub, &over, &base, &budget))?
                }
            };
            report.results = serde_json::to_value(&result)?;
            print_report(&report)?;
            Ok(exit::OK)
        }

        Command::Split {
            input,
            mode,
            trials,
            seed,
            family_out,
            split_out,
        } => {
            let family = read_family(&input)?;
            let search = match mode {
                Mode::Exhaustive => SearchMode::Exhaustive,
                Mode::Random => SearchMode::Randomized,
            };
            let mut report = ExperimentReport::new("split", (mode == Mode::Random).then_some(seed))
                .input("input", input.display().to_string())
                .input("mode", format!("{mode:?}").to_lowercase())
                .input("trials", trials);
            let result = report.timed("search", || find_good_split(&family, search, trials, seed, &budget))?;
            if let Some(path) = family_out {
                fs::write(path, family_to_text(&result.retained))?;
            }
            if let Some(path) = split_out {
                fs::write(path, split_to_text(&result.split))?;
            }
            report.results = serde_json::to_value(result.report())?;
            print_report(&report)?;
            Ok(exit::OK)
        }

        Command::TransversalCheck { input, j } => {
            let family = read_family(&input)?;
            let m = family.max_card();
            let js: Vec<usize> = match j {
                Some(j) => vec![j],
                None => (0..m).collect(),
            };
            let mut report = ExperimentReport::new("transversal-check", None)
                .input("input", input.display().to_string())
                .input("j", js.clone());
            let mut rows = Vec::new();
            let mut all_equal = true;
            for j in js {
                let brute = report.timed(&format!("brute-{j}"), || transversal_count_brute(&family, j, &budget))?;
                let formula = transversal_formula(&family, j)?;
                let equal = formula.is_integer() && formula.to_integer() == brute.into();
                all_equal &= equal;
                rows.push(json!({
                    "j": j,
                    "brute": brute.to_string(),
                    "formula": formula.to_string(),
                    "equal": equal,
                }));
            }
            report.results = json!({ "rows": rows, "allEqual": all_equal });
            print_report(&report)?;
            Ok(if all_equal { exit::OK } else { exit::OTHER })
        }

        Command::Basesets {
            input,
            mprime,
            constants,
            split,
        } => {
            let family = read_family(&input)?;
            let cfg = Constants::parse_json(&read(&constants)?, family.len())?;
            let split = Arc::new(match split {
                Some(p) => read_split(&p)?,
                None => Split::contiguous(family.universe(), cfg.m)?,
            });
            let sub = Subsplit::from_arc(split.clone(), (0..mprime.min(split.rank())).collect())?;
            let g = SetFamily::collect(family.universe(), family.iter().map(|u| u.intersection(sub.union())))?;
            let coll = GCollection::from_components(split.clone(), mprime, [(sub, family.clone())])?;
            let mut report = ExperimentReport::new("basesets", None)
                .input("input", input.display().to_string())
                .input("mprime", mprime)
                .input("constants", &cfg)
                .input("split", split.to_label_lists());
            match report.timed("basesets", || base_sets(mprime, &g, &coll, &cfg, &budget)) {
                Ok(out) => {
                    write_trace(trace, &out.trace)?;
                    report.results = serde_json::to_value(out.report())?;
                    print_report(&report)?;
                    Ok(exit::OK)
                }
                Err(Error::GuaranteeViolated(failure)) => {
                    write_trace(trace, &failure.trace)?;
                    Err(Error::GuaranteeViolated(failure))
                }
                Err(e) => Err(e),
            }
        }

        Command::ProcessR { input, constants, split } => {
            let family = read_family(&input)?;
            let cfg = Constants::parse_json(&read(&constants)?, family.len())?;
            let split = Arc::new(match split {
                Some(p) => read_split(&p)?,
                None => Split::contiguous(family.universe(), cfg.m)?,
            });
            let mut report = ExperimentReport::new("process-r", None)
                .input("input", input.display().to_string())
                .input("constants", &cfg)
                .input("split", split.to_label_lists());
            let outcome = match report.timed("process", || process_r(&family, split, &cfg, &budget)) {
                Ok(o) => o,
                Err(Error::Process(failure)) => {
                    let records: Vec<TraceRecord> = failure
                        .steps
                        .iter()
                        .flat_map(|s| s.output.trace.iter().map(move |t| TraceRecord { p: Some(s.p), ..t.clone() }))
                        .collect();
                    write_trace(trace, &records)?;
                    return Err(Error::Process(failure));
                }
                Err(e) => return Err(e),
            };
            write_trace(trace, &outcome.trace())?;
            let checks = outcome.audit(cfg.m);
            let remark_g = report.timed("audit", || audit_remark_g(&outcome, &family, &cfg, &budget));
            let ok = checks.iter().all(|c| c.ok) && remark_g.sandwich_holds() && remark_g.consistent();
            report.results = json!({
                "process": outcome.report(),
                "checks": checks,
                "remarkG": remark_g,
                "ok": ok,
            });
            print_report(&report)?;
            Ok(if ok { exit::OK } else { exit::OTHER })
        }

        Command::VerifyBound { k, m, trials, seed } => {
            let ks = parse_range(&k)?;
            let ms = parse_range(&m)?;
            let mut report = ExperimentReport::new("verify-bound", Some(seed))
                .input("k", &ks)
                .input("m", &ms)
                .input("trials", trials);
            let exp = report.timed("experiment", || verify_bound_experiment(&ks, &ms, trials, seed, &budget))?;
            report.results = serde_json::to_value(exp)?;
            print_report(&report)?;
            Ok(exit::OK)
        }

        Command::PadUniverse { input, m, format } => {
            let family = read_family(&input)?;
            emit(&render(&pad_universe(&family, m)?, format))?;
            Ok(exit::OK)
        }
    }
}
