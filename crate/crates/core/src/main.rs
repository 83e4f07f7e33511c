//! Thin command-line front end over the library. Exit codes: 0 decided,
//! 2 validation failure, 3 a verdict is INDETERMINATE, 4 internal
//! invariant violation.

use clap::{Parser, Subcommand};
use horotree::cli::{self, CliError};
use horotree::complex::{
    build_ladder, build_slab, build_slab_relaxed, essential_triviality, kernel_slab_connectivity,
    reduced_homology, witness_sphere, Constraint,
};
use horotree::cones;
use horotree::moufang;
use horotree::rat::{self, Rat};
use horotree::root_data::{build_root_system, PlaceSpec, TypeLetter};
use horotree::trees::{build_truncation, HVertex, TreeParams};
use serde_json::json;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "horotree",
    version,
    about = "Exact tree-product homology and cone bounds"
)]
struct Args {
    #[command(subcommand)]
    command: Command,
    /// output directory for artifacts (defaults to stdout only)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// seed recorded in certificates
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// worker threads for independent stages
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// output format for tabular artifacts
    #[arg(long, global = true, default_value = "json")]
    format: String,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario from a declarative config file
    Run {
        #[arg(long)]
        config: PathBuf,
    },
    /// Structurally compare two certificates
    Compare { a: PathBuf, b: PathBuf },
    /// m-tameness of the restricted negative-root system
    Tame {
        #[arg(long, default_value = "A")]
        r#type: char,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        places: usize,
        #[arg(long, default_value_t = 2)]
        base_field: u64,
        #[arg(short)]
        m: usize,
    },
    /// Cone membership of a query form
    Conv {
        #[arg(long, default_value = "A")]
        r#type: char,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        places: usize,
        #[arg(long, default_value_t = 2)]
        base_field: u64,
        #[arg(short)]
        m: usize,
        /// comma-separated rationals in restricted coordinates
        #[arg(long)]
        query: String,
        /// which cone: `m` (all negative roots) or `ms` (distinct-place base roots)
        #[arg(long, default_value = "m")]
        cone: String,
    },
    /// Classify a query against the two polyhedral bounds
    SigmaClassify {
        #[arg(long, default_value = "A")]
        r#type: char,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        places: usize,
        #[arg(long, default_value_t = 2)]
        base_field: u64,
        #[arg(short)]
        m: usize,
        #[arg(long)]
        query: String,
    },
    /// Finiteness certificate for a torus-direction normal subgroup
    NormalSubgroup {
        #[arg(long, default_value = "A")]
        r#type: char,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        places: usize,
        #[arg(long, default_value_t = 2)]
        base_field: u64,
        #[arg(short)]
        m: usize,
        /// ambient direction vector, comma-separated; repeatable
        #[arg(long)]
        direction: Vec<String>,
    },
    /// The finiteness pattern for |S| places
    Finiteness {
        #[arg(long)]
        s: usize,
    },
    /// Reduced homology of an interval slab in a tree product
    Homology {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        factors: usize,
        /// window as lo,hi
        #[arg(long)]
        window: String,
        /// interval as a,b (rationals)
        #[arg(long)]
        interval: String,
        #[arg(long, default_value_t = 2)]
        slack: i64,
        /// allow window contact (finite-horizon slabs)
        #[arg(long, default_value_t = false)]
        relaxed: bool,
    },
    /// Witness sphere cycle at a given radius
    Witness {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        factors: usize,
        #[arg(long)]
        window: String,
        #[arg(long)]
        radius: String,
    },
    /// Directed system over nested intervals with essential-triviality verdict
    Ladder {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        factors: usize,
        #[arg(long)]
        window: String,
        /// semicolon-separated intervals, each a,b
        #[arg(long)]
        intervals: String,
        #[arg(long, default_value_t = 2)]
        slack: i64,
    },
    /// Homology of the weighted-sum kernel slab (rank 1)
    KernelSlab {
        #[arg(long)]
        places: usize,
        #[arg(long, default_value_t = 2)]
        base_field: u64,
        /// comma-separated degree weights (default all 1)
        #[arg(long, default_value = "")]
        degrees: String,
        #[arg(long)]
        width: String,
        #[arg(long)]
        window_halfwidth: i64,
    },
    /// Directed enumeration of root-group products
    Enumerate {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        steps: u32,
    },
    /// Coconvexity audit of a directed enumeration
    AuditDirected {
        #[arg(long)]
        q: u32,
        #[arg(long)]
        steps: u32,
    },
    /// Chamber coverage of a window by an enumeration
    Coverage {
        #[arg(long)]
        q: u32,
        /// enumeration range radius r (words over positions -r..r)
        #[arg(long)]
        radius: u32,
        #[arg(long)]
        window_radius: i64,
    },
}

fn parse_pair_i64(s: &str) -> Result<(i64, i64), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Validation(format!("expected lo,hi: `{s}`")));
    }
    let lo = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("bad integer in `{s}`")))?;
    let hi = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::Validation(format!("bad integer in `{s}`")))?;
    Ok((lo, hi))
}

fn parse_pair_rat(s: &str) -> Result<(Rat, Rat), CliError> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Validation(format!("expected a,b: `{s}`")));
    }
    Ok((
        rat::parse_rat(parts[0]).map_err(CliError::Validation)?,
        rat::parse_rat(parts[1]).map_err(CliError::Validation)?,
    ))
}

fn parse_vec_rat(s: &str) -> Result<Vec<Rat>, CliError> {
    s.split(',')
        .map(|x| rat::parse_rat(x).map_err(CliError::Validation))
        .collect()
}

fn restricted(
    t: char,
    rank: usize,
    places: usize,
    base_field: u64,
) -> Result<
    (
        horotree::root_data::RootSystem,
        Vec<PlaceSpec>,
        horotree::root_data::FormSet,
    ),
    CliError,
> {
    let letter = TypeLetter::from_char(t)
        .ok_or_else(|| CliError::Validation(format!("unknown type letter {t}")))?;
    let rs = build_root_system(letter, rank).map_err(|e| CliError::Validation(e.to_string()))?;
    let ps: Vec<PlaceSpec> = (0..places)
        .map(|i| PlaceSpec::new(&format!("p{}", i + 1), 1, base_field))
        .collect::<Result<_, _>>()
        .map_err(|e: horotree::root_data::RootDataError| CliError::Validation(e.to_string()))?;
    let (forms, _) = horotree::root_data::restricted_negative_system(&rs, &ps)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok((rs, ps, forms))
}

fn emit(
    args: &Args,
    name: &str,
    value: &serde_json::Value,
    csv: Option<String>,
) -> Result<(), CliError> {
    if let Some(dir) = &args.out {
        std::fs::create_dir_all(dir)?;
        std::fs::write(
            dir.join(format!("{name}.json")),
            serde_json::to_string_pretty(value).unwrap(),
        )?;
        if let (Some(csv), "csv") = (&csv, args.format.as_str()) {
            std::fs::write(dir.join(format!("{name}.csv")), csv)?;
        }
    }
    if args.format == "csv" {
        if let Some(csv) = csv {
            print!("{csv}");
            return Ok(());
        }
    }
    println!("{}", serde_json::to_string_pretty(value).unwrap());
    Ok(())
}

fn run(args: &Args) -> Result<i32, CliError> {
    let mut exit = 0;
    match &args.command {
        Command::Run { config } => {
            let text = std::fs::read_to_string(config)?;
            let cert = cli::run_scenario_text(&text, args.jobs.max(1))?;
            if cert.indeterminate {
                exit = 3;
            }
            let v = serde_json::to_value(&cert).unwrap();
            emit(args, "certificate", &v, None)?;
        }
        Command::Compare { a, b } => {
            let ca: cli::Certificate = serde_json::from_str(&std::fs::read_to_string(a)?)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let cb: cli::Certificate = serde_json::from_str(&std::fs::read_to_string(b)?)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let diff = cli::compare_certificates(&ca, &cb)?;
            emit(args, "diff", &serde_json::to_value(&diff).unwrap(), None)?;
        }
        Command::Tame {
            r#type,
            rank,
            places,
            base_field,
            m,
        } => {
            let (_, _, forms) = restricted(*r#type, *rank, *places, *base_field)?;
            let covs = forms.covectors();
            let (tame, cert) =
                cones::is_m_tame(&covs, *m).map_err(|e| CliError::Validation(e.to_string()))?;
            let v = json!({ "m": m, "tame": tame, "certificate": serde_json::to_value(&cert).unwrap() });
            emit(args, "tame", &v, None)?;
        }
        Command::Conv {
            r#type,
            rank,
            places,
            base_field,
            m,
            query,
            cone,
        } => {
            let (_, _, forms) = restricted(*r#type, *rank, *places, *base_field)?;
            let q = parse_vec_rat(query)?;
            let cert = match cone.as_str() {
                "m" => cones::conv_m_member(&forms.covectors(), *m, &q),
                "ms" => {
                    let base = cones::base_forms_by_place(&forms, *places);
                    cones::conv_ms_member(&base, *m, &q)
                }
                other => return Err(CliError::Validation(format!("unknown cone `{other}`"))),
            }
            .map_err(|e| CliError::Validation(e.to_string()))?;
            emit(args, "conv", &serde_json::to_value(&cert).unwrap(), None)?;
        }
        Command::SigmaClassify {
            r#type,
            rank,
            places,
            base_field,
            m,
            query,
        } => {
            let letter = TypeLetter::from_char(*r#type)
                .ok_or_else(|| CliError::Validation("bad type".into()))?;
            let rs = build_root_system(letter, *rank)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let ps: Vec<PlaceSpec> = (0..*places)
                .map(|i| PlaceSpec::unit(i, *base_field))
                .collect();
            let q = parse_vec_rat(query)?;
            let verdict = cones::sigma_bound_classify(&rs, &ps, *m, &q)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if verdict.is_indeterminate() {
                exit = 3;
            }
            emit(
                args,
                "sigma",
                &serde_json::to_value(&verdict).unwrap(),
                None,
            )?;
        }
        Command::NormalSubgroup {
            r#type,
            rank,
            places,
            base_field,
            m,
            direction,
        } => {
            let letter = TypeLetter::from_char(*r#type)
                .ok_or_else(|| CliError::Validation("bad type".into()))?;
            let rs = build_root_system(letter, *rank)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let ps: Vec<PlaceSpec> = (0..*places)
                .map(|i| PlaceSpec::unit(i, *base_field))
                .collect();
            let dirs: Vec<Vec<Rat>> = direction
                .iter()
                .map(|d| parse_vec_rat(d))
                .collect::<Result<_, _>>()?;
            let verdict = cones::normal_subgroup_certificate(&rs, &ps, &dirs, *m)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            if verdict.is_indeterminate() {
                exit = 3;
            }
            emit(
                args,
                "normal-subgroup",
                &serde_json::to_value(&verdict).unwrap(),
                None,
            )?;
        }
        Command::Finiteness { s } => {
            if *s < 1 {
                return Err(CliError::Validation("s must be >= 1".into()));
            }
            let report = cones::finiteness_report(*s);
            emit(
                args,
                "finiteness",
                &serde_json::to_value(report).unwrap(),
                None,
            )?;
        }
        Command::Homology {
            q,
            factors,
            window,
            interval,
            slack,
            relaxed,
        } => {
            let w = parse_pair_i64(window)?;
            let (a, b) = parse_pair_rat(interval)?;
            let params =
                TreeParams::new(*q, "t").map_err(|e| CliError::Validation(e.to_string()))?;
            let tree = build_truncation(&params, w, &HVertex::apartment(w.0))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let trees: Vec<_> = (0..*factors).map(|_| tree.clone()).collect();
            let slab = if *relaxed {
                build_slab_relaxed(&trees, Constraint::interval(a, b))
            } else {
                build_slab(&trees, Constraint::interval(a, b), *slack)
            }
            .map_err(|e| CliError::Validation(e.to_string()))?;
            let summary = reduced_homology(&slab);
            let csv = cli::betti_csv(&summary);
            emit(
                args,
                "homology",
                &serde_json::to_value(&summary).unwrap(),
                Some(csv),
            )?;
        }
        Command::Witness {
            q,
            factors,
            window,
            radius,
        } => {
            let w = parse_pair_i64(window)?;
            let r = rat::parse_rat(radius).map_err(CliError::Validation)?;
            let params =
                TreeParams::new(*q, "t").map_err(|e| CliError::Validation(e.to_string()))?;
            let tree = build_truncation(&params, w, &HVertex::apartment(w.0))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let trees: Vec<_> = (0..*factors).map(|_| tree.clone()).collect();
            let base: Vec<HVertex> = (0..*factors).map(|_| HVertex::apartment(w.0)).collect();
            let witness = witness_sphere(&trees, &base, r)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let cells: Vec<serde_json::Value> = witness
                .cycle
                .iter()
                .map(|(chain, coeff)| {
                    json!({
                        "cells": chain.iter().map(|c| c.describe()).collect::<Vec<_>>(),
                        "coeff": coeff.to_string(),
                    })
                })
                .collect();
            let v = json!({
                "level": rat::format_rat(&witness.level),
                "radius": rat::format_rat(&witness.radius),
                "simplices": cells,
            });
            emit(args, "witness", &v, None)?;
        }
        Command::Ladder {
            q,
            factors,
            window,
            intervals,
            slack,
        } => {
            let w = parse_pair_i64(window)?;
            let params =
                TreeParams::new(*q, "t").map_err(|e| CliError::Validation(e.to_string()))?;
            let tree = build_truncation(&params, w, &HVertex::apartment(w.0))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let trees: Vec<_> = (0..*factors).map(|_| tree.clone()).collect();
            let constraints: Vec<Constraint> = intervals
                .split(';')
                .map(|s| {
                    let (a, b) = parse_pair_rat(s)?;
                    Ok(Constraint::interval(a, b))
                })
                .collect::<Result<_, CliError>>()?;
            let ds = build_ladder(&trees, &constraints, *slack, false)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let report = essential_triviality(&ds);
            let v = json!({
                "stages": ds.stage_ranks.iter().map(|(r, t)| json!({
                    "free_rank": r,
                    "torsion": t.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "maps": ds
                    .consecutive
                    .iter()
                    .map(|mat| {
                        mat.iter()
                            .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>())
                            .collect::<Vec<_>>()
                    })
                    .collect::<Vec<_>>(),
                "essential_triviality": serde_json::to_value(&report).unwrap(),
            });
            emit(args, "ladder", &v, None)?;
        }
        Command::KernelSlab {
            places,
            base_field,
            degrees,
            width,
            window_halfwidth,
        } => {
            let rs = build_root_system(TypeLetter::A, 1).expect("A1 valid");
            let degs: Vec<u32> = if degrees.is_empty() {
                vec![]
            } else {
                degrees
                    .split(',')
                    .map(|d| {
                        d.trim()
                            .parse()
                            .map_err(|_| CliError::Validation("bad degree".into()))
                    })
                    .collect::<Result<_, _>>()?
            };
            let ps: Vec<PlaceSpec> = (0..*places)
                .map(|i| {
                    PlaceSpec::new(
                        &format!("p{}", i + 1),
                        degs.get(i).copied().unwrap_or(1),
                        *base_field,
                    )
                })
                .collect::<Result<_, _>>()
                .map_err(|e: horotree::root_data::RootDataError| {
                    CliError::Validation(e.to_string())
                })?;
            let wd = rat::parse_rat(width).map_err(CliError::Validation)?;
            let summary = kernel_slab_connectivity(&rs, &ps, wd, *window_halfwidth)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let csv = cli::betti_csv(&summary);
            emit(
                args,
                "kernel-slab",
                &serde_json::to_value(&summary).unwrap(),
                Some(csv),
            )?;
        }
        Command::Enumerate { q, steps } => {
            let mut e = moufang::Enumeration::single_group_seed(*q, 0)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            for _ in 0..*steps {
                e = moufang::extend_directed_enumeration(&e)
                    .map_err(|err| CliError::Validation(err.to_string()))?;
            }
            let v = json!({ "q": q, "range": e.range, "words": e.to_doc() });
            emit(args, "enumeration", &v, None)?;
        }
        Command::AuditDirected { q, steps } => {
            let mut e = moufang::Enumeration::single_group_seed(*q, 0)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            for _ in 0..*steps {
                e = moufang::extend_directed_enumeration(&e)
                    .map_err(|err| CliError::Validation(err.to_string()))?;
            }
            let audit = moufang::verify_directedness(&e);
            emit(args, "audit", &serde_json::to_value(&audit).unwrap(), None)?;
        }
        Command::Coverage {
            q,
            radius,
            window_radius,
        } => {
            let mut e = moufang::Enumeration::single_group_seed(*q, 0)
                .map_err(|e| CliError::Validation(e.to_string()))?;
            for _ in 0..*radius {
                e = moufang::extend_directed_enumeration(&e)
                    .map_err(|err| CliError::Validation(err.to_string()))?;
            }
            let params =
                TreeParams::new(*q, "t").map_err(|e| CliError::Validation(e.to_string()))?;
            let window = (-window_radius, window_radius + 1);
            let tree = build_truncation(&params, window, &HVertex::apartment(window.0))
                .map_err(|e| CliError::Validation(e.to_string()))?;
            let report = moufang::verify_covering(&e, &tree);
            emit(
                args,
                "coverage",
                &serde_json::to_value(&report).unwrap(),
                None,
            )?;
        }
    }
    Ok(exit)
}

fn main() {
    let args = Args::parse();
    match run(&args) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
