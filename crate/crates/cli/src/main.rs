//! `carnot` — decide, certify, and explore semigeneration of stratified Lie
//! algebras from presentation files.
//!
//! Exit codes: 0 on a definite result, 2 when the verdict is Unknown, 1 on
//! validation or usage failures.

use anyhow::{anyhow, bail, Context, Result};
use carnot_core::bch::{sample_semigroup, SampleParams};
use carnot_core::engel::{is_nonabnormal, make_engel, recognize_engel};
use carnot_core::hall::free_nilpotent;
use carnot_core::lie::GradedLieAlgebra;
use carnot_core::presentation::PresentationFile;
use carnot_core::rat::{format_rat, parse_rat, Rat};
use carnot_core::semigen::wire::{
    decision_from_wire, decision_to_wire, product_quotient_from_wire, DecisionWire,
    ProductQuotientWire,
};
use carnot_core::semigen::{
    check_type_diamond, check_type_star, decide_halfspace, decide_semigenerated,
    find_engel_quotients, saturate_edge, verify_certificate, Certificate, DecideOptions,
    DiamondAnswer, HalfSpace, SaturateOptions, SearchOptions, StarAnswer, Verdict,
};
use clap::{Parser, Subcommand};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "carnot",
    version,
    about = "Exact semigeneration decisions for stratified Lie algebras"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Validate a presentation file (grading, Jacobi, stratification).
    Validate { file: PathBuf },
    /// Print layers, center, series, and trimmedness.
    Info {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Emit the free nilpotent algebra of the given rank and step.
    Free {
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        step: usize,
    },
    /// Emit the n-th Engel-type algebra.
    Engel {
        #[arg(long)]
        n: usize,
    },
    /// Recognize an Engel-type algebra and print the adapted basis.
    Recognize {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Type (⋆) check with an exact radical-chain witness.
    Star {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Type (◊) check; `--cert` supplies product-quotient data.
    Diamond {
        file: PathBuf,
        #[arg(long)]
        cert: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Saturate the edge bound for one half-space.
    Saturate {
        file: PathBuf,
        /// Covector on V1, comma-separated rationals.
        #[arg(long)]
        lambda: String,
        /// Extra V1 generators for the R3 pair search, `;`-separated vectors.
        #[arg(long)]
        generators: Option<String>,
        /// Let R2 range over V1 + E instead of V1.
        #[arg(long)]
        cone: bool,
        #[arg(long)]
        json: bool,
    },
    /// Decide semigeneration of the algebra, or of one half-space with
    /// `--lambda`.
    Decide {
        file: PathBuf,
        #[arg(long)]
        lambda: Option<String>,
        /// Product-quotient data for the diamond route.
        #[arg(long)]
        diamond_cert: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_samples: Option<usize>,
        #[arg(long)]
        generators: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Search for Engel-type quotients.
    Quotients {
        file: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_samples: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Abnormality of the horizontal line through `--nu` (step ≤ 3).
    Abnormal {
        file: PathBuf,
        /// Direction in V1, comma-separated rationals.
        #[arg(long)]
        nu: String,
        #[arg(long)]
        json: bool,
    },
    /// Sample the half-space semigroup with exact BCH products; emits a JSON
    /// run record.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        word_length: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 2)]
        bound: i64,
        #[arg(long, default_value_t = 2)]
        denominator: i64,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Re-verify a decision certificate against the algebra.
    Verify { file: PathBuf, cert: PathBuf },
}

fn load_algebra(path: &Path) -> Result<(String, GradedLieAlgebra)> {
    let p =
        PresentationFile::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let g = p
        .to_algebra()
        .with_context(|| format!("validating {}", path.display()))?;
    Ok((p.name, g))
}

fn parse_vector(s: &str) -> Result<Vec<Rat>> {
    s.split(',')
        .map(|c| parse_rat(c).map_err(|e| anyhow!("bad rational `{c}`: {e}")))
        .collect()
}

fn parse_lambda(g: &GradedLieAlgebra, s: &str) -> Result<HalfSpace> {
    let lam = parse_vector(s)?;
    if lam.len() != g.v1_dim() {
        bail!(
            "--lambda needs {} coordinates, got {}",
            g.v1_dim(),
            lam.len()
        );
    }
    Ok(HalfSpace::new(lam)?)
}

fn parse_generators(g: &GradedLieAlgebra, s: &str) -> Result<Vec<Vec<Rat>>> {
    s.split(';')
        .map(|v| {
            let coords = parse_vector(v)?;
            if coords.len() != g.v1_dim() {
                bail!("generator needs {} coordinates", g.v1_dim());
            }
            Ok(g.embed_v1(&coords))
        })
        .collect()
}

fn load_diamond_cert(path: &Path) -> Result<carnot_core::semigen::ProductQuotientData> {
    let s = std::fs::read_to_string(path)?;
    let wire: ProductQuotientWire = serde_json::from_str(&s)?;
    product_quotient_from_wire(&wire).map_err(|e| anyhow!("bad diamond certificate: {e}"))
}

fn print_vectors(g: &GradedLieAlgebra, rows: &[Vec<Rat>]) -> String {
    rows.iter()
        .map(|r| g.fmt_vector(r))
        .collect::<Vec<_>>()
        .join(", ")
}

fn certificate_summary(g: &GradedLieAlgebra, cert: &Certificate) -> String {
    match cert {
        Certificate::StepTwo => "step ≤ 2".into(),
        Certificate::Saturation {
            trace, conclusion, ..
        } => format!(
            "saturation trace of {} step(s); {}",
            trace.len(),
            match conclusion {
                carnot_core::semigen::SaturationConclusion::V3InEdge => "V3 ⊆ E",
                carnot_core::semigen::SaturationConclusion::V2InEdge => "V2 ⊆ E",
            }
        ),
        Certificate::DiamondBasis { basis, .. } => {
            format!("diamond basis ({})", print_vectors(g, basis))
        }
        Certificate::DiamondProductQuotient(data) => format!(
            "product-quotient construction with {} factor(s)",
            data.factors.len()
        ),
        Certificate::EngelQuotient(c) => format!(
            "Engel quotient (ideal dim = {}, n = {})",
            c.ideal.dim(),
            c.n
        ),
        Certificate::EngelSearchEmpty {
            reductions,
            rejection,
        } => format!(
            "exhaustive empty Engel search ({} reduction(s); {})",
            reductions.len(),
            rejection
        ),
    }
}

fn run() -> Result<i32> {
    let cli = Cli::try_parse().map_err(|e| anyhow!(e.to_string()))?;
    match cli.cmd {
        Cmd::Validate { file } => {
            let (name, g) = load_algebra(&file)?;
            println!(
                "OK {name}: dim {}, layers {:?}, stratified: {}",
                g.dim(),
                g.layer_dims(),
                g.is_stratified()
            );
            Ok(0)
        }
        Cmd::Info { file, json } => {
            let (name, g) = load_algebra(&file)?;
            let center = g.center();
            let (trimmed, _) = g.is_trimmed();
            let lcs = g.lower_central_series();
            if json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "name": name,
                    "dim": g.dim(),
                    "layers": g.layer_dims(),
                    "stratified": g.is_stratified(),
                    "center_dim": center.space.dim(),
                    "center_by_layer": center.by_layer.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                    "trimmed": trimmed,
                    "lower_central_series_dims": lcs.iter().map(|s| s.dim()).collect::<Vec<_>>(),
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!("{name}: dim {}, layers {:?}", g.dim(), g.layer_dims());
                println!("stratified: {}", g.is_stratified());
                println!(
                    "center: dim {} (by layer {:?})",
                    center.space.dim(),
                    center.by_layer.iter().map(|s| s.dim()).collect::<Vec<_>>()
                );
                println!("trimmed: {trimmed}");
                println!(
                    "lower central series dims: {:?}",
                    lcs.iter().map(|s| s.dim()).collect::<Vec<_>>()
                );
            }
            Ok(0)
        }
        Cmd::Free { rank, step } => {
            if rank < 1 || step < 1 {
                bail!("--rank and --step must be ≥ 1");
            }
            if step > 6 {
                bail!("free algebras beyond step 6 are out of scope");
            }
            let f = free_nilpotent(rank, step);
            let p = PresentationFile::from_algebra(&format!("free{rank}{step}"), &f.algebra);
            println!("{}", p.to_json());
            Ok(0)
        }
        Cmd::Engel { n } => {
            if n < 1 {
                bail!("--n must be ≥ 1");
            }
            let g = make_engel(n);
            let p = PresentationFile::from_algebra(&format!("engel{n}"), &g);
            println!("{}", p.to_json());
            Ok(0)
        }
        Cmd::Recognize { file, json } => {
            let (name, g) = load_algebra(&file)?;
            match recognize_engel(&g) {
                Ok(s) => {
                    if json {
                        let doc = serde_json::json!({
                            "schema": 1,
                            "name": name,
                            "engel_type": true,
                            "n": s.n,
                            "adapted_basis": s.adapted_basis.iter()
                                .map(|v| v.iter().map(format_rat).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                            "gram": s.gram.iter()
                                .map(|r| r.iter().map(format_rat).collect::<Vec<_>>())
                                .collect::<Vec<_>>(),
                        });
                        println!("{}", serde_json::to_string_pretty(&doc)?);
                    } else {
                        println!("ENGEL_TYPE n={}", s.n);
                        println!("X      = {}", g.fmt_vector(&s.adapted_basis[0]));
                        for i in 1..=s.n {
                            println!("Y{i}     = {}", g.fmt_vector(&s.adapted_basis[i]));
                        }
                        for i in 1..=s.n {
                            println!("T{i}     = {}", g.fmt_vector(&s.adapted_basis[s.n + i]));
                        }
                        println!("Z      = {}", g.fmt_vector(&s.adapted_basis[2 * s.n + 1]));
                        let gram: Vec<Vec<String>> = s
                            .gram
                            .iter()
                            .map(|r| r.iter().map(format_rat).collect())
                            .collect();
                        println!("gram   = {gram:?}");
                    }
                    Ok(0)
                }
                Err(reason) => {
                    if json {
                        let doc = serde_json::json!({
                            "schema": 1,
                            "name": name,
                            "engel_type": false,
                            "reason": reason.to_string(),
                        });
                        println!("{}", serde_json::to_string_pretty(&doc)?);
                    } else {
                        println!("NOT_ENGEL_TYPE: {reason}");
                    }
                    Ok(0)
                }
            }
        }
        Cmd::Star { file, json } => {
            let (name, g) = load_algebra(&file)?;
            let r = check_type_star(&g);
            let verdict = match r.answer {
                StarAnswer::Yes => "YES",
                StarAnswer::No => "NO",
                StarAnswer::Unknown => "UNKNOWN",
            };
            if json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "name": name,
                    "answer": verdict,
                    "chain_length": r.steps.len(),
                    "final_dim": r.final_subspace.dim(),
                    "v1_dim": g.v1_dim(),
                    "notes": r.notes,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                match r.answer {
                    StarAnswer::Yes => println!("YES; every basis of V1 works"),
                    StarAnswer::No => println!(
                        "NO; witness: radical chain of {} step(s) forces the star set into a {}-dim subspace < dim V1 = {}",
                        r.steps.len(),
                        r.final_subspace.dim(),
                        g.v1_dim()
                    ),
                    StarAnswer::Unknown => println!("UNKNOWN; indefinite forms remain"),
                }
            }
            Ok(if matches!(r.answer, StarAnswer::Unknown) {
                2
            } else {
                0
            })
        }
        Cmd::Diamond { file, cert, json } => {
            let (name, g) = load_algebra(&file)?;
            let hint = cert.map(|p| load_diamond_cert(&p)).transpose()?;
            let r = check_type_diamond(&g, hint.as_ref(), 0)?;
            let (verdict, detail) = match &r.answer {
                DiamondAnswer::Yes(e) => ("YES", format!("{e:?}")),
                DiamondAnswer::No { hyperplane, .. } => (
                    "NO",
                    format!(
                        "abelian hyperplane {}; type (⋆) fails",
                        print_vectors(&g, hyperplane.basis())
                    ),
                ),
                DiamondAnswer::Unknown => ("UNKNOWN", String::new()),
            };
            if json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "name": name,
                    "answer": verdict,
                    "detail": detail,
                    "notes": r.notes,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else if detail.is_empty() {
                println!("{verdict}");
            } else {
                println!("{verdict}; {detail}");
            }
            Ok(if matches!(r.answer, DiamondAnswer::Unknown) {
                2
            } else {
                0
            })
        }
        Cmd::Saturate {
            file,
            lambda,
            generators,
            cone,
            json,
        } => {
            let (name, g) = load_algebra(&file)?;
            let w = parse_lambda(&g, &lambda)?;
            let opts = SaturateOptions {
                r2_over_cone: cone,
                generators: match generators {
                    Some(s) => parse_generators(&g, &s)?,
                    None => Vec::new(),
                },
                ..Default::default()
            };
            let edge = saturate_edge(&g, &w, &opts)?;
            let v3_in = edge.e.contains(&g.layer_subspace(3))?;
            let v2_in = edge.e.contains(&g.layer_subspace(2))?;
            if json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "name": name,
                    "lambda": w.lambda.iter().map(format_rat).collect::<Vec<_>>(),
                    "edge_dim": edge.e.dim(),
                    "edge_basis": edge.e.basis().iter()
                        .map(|v| v.iter().map(format_rat).collect::<Vec<_>>())
                        .collect::<Vec<_>>(),
                    "trace": edge.trace.iter().map(|s| serde_json::json!({
                        "rule": format!("{:?}", s.rule),
                        "inputs": s.inputs.iter().map(|v| v.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
                        "added": s.added.iter().map(|v| v.iter().map(format_rat).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "v3_in_edge": v3_in,
                    "v2_in_edge": v2_in,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!(
                    "E ⊇ {{{}}} (dim {})",
                    print_vectors(&g, edge.e.basis()),
                    edge.e.dim()
                );
                for (i, s) in edge.trace.iter().enumerate() {
                    println!(
                        "  step {}: {:?} adds {}",
                        i + 1,
                        s.rule,
                        print_vectors(&g, &s.added)
                    );
                }
                if g.step() <= 4 && v3_in {
                    println!("V3 ⊆ E ⇒ half-space semigenerating");
                } else if g.step() <= 4 && v2_in {
                    println!("V2 ⊆ E ⇒ half-space semigenerating");
                }
            }
            Ok(0)
        }
        Cmd::Decide {
            file,
            lambda,
            diamond_cert,
            seed,
            max_samples,
            generators,
            json,
        } => {
            let (name, g) = load_algebra(&file)?;
            let mut opts = DecideOptions::default();
            if let Some(s) = seed {
                opts.search.seed = s;
            }
            if let Some(m) = max_samples {
                opts.search.max_samples = m;
            }
            if let Some(p) = diamond_cert {
                opts.diamond_hint = Some(load_diamond_cert(&p)?);
            }
            if let Some(s) = generators {
                opts.saturate.generators = parse_generators(&g, &s)?;
            }
            let decision = match lambda {
                Some(l) => {
                    let w = parse_lambda(&g, &l)?;
                    decide_halfspace(&g, &w, &opts)?
                }
                None => decide_semigenerated(&g, &opts)?,
            };
            if json {
                let wire = decision_to_wire(&name, &decision);
                println!("{}", serde_json::to_string_pretty(&wire)?);
            } else {
                match &decision.certificate {
                    Some(c) => println!(
                        "{}; certificate: {}",
                        decision.verdict,
                        certificate_summary(&g, c)
                    ),
                    None => println!("{}", decision.verdict),
                }
                for n in &decision.notes {
                    println!("  note: {n}");
                }
            }
            Ok(match decision.verdict {
                Verdict::Unknown => 2,
                _ => 0,
            })
        }
        Cmd::Quotients {
            file,
            seed,
            max_samples,
            json,
        } => {
            let (name, g) = load_algebra(&file)?;
            let mut opts = SearchOptions::default();
            if let Some(s) = seed {
                opts.seed = s;
            }
            if let Some(m) = max_samples {
                opts.max_samples = m;
            }
            let out = find_engel_quotients(&g, &opts)?;
            if json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "name": name,
                    "exhaustive": out.exhaustive,
                    "certs": out.certs.iter().map(|c| serde_json::json!({
                        "n": c.n,
                        "ideal_dim": c.ideal.dim(),
                        "ideal_basis": c.ideal.basis().iter()
                            .map(|v| v.iter().map(format_rat).collect::<Vec<_>>())
                            .collect::<Vec<_>>(),
                    })).collect::<Vec<_>>(),
                    "log": out.log,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!(
                    "{} Engel-type quotient(s); exhaustive: {}",
                    out.certs.len(),
                    out.exhaustive
                );
                for c in &out.certs {
                    println!(
                        "  n = {}, ideal dim = {}: span{{{}}}",
                        c.n,
                        c.ideal.dim(),
                        print_vectors(&g, c.ideal.basis())
                    );
                }
                for l in &out.log {
                    println!("  log: {l}");
                }
                let _ = name;
            }
            Ok(0)
        }
        Cmd::Abnormal { file, nu, json } => {
            let (name, g) = load_algebra(&file)?;
            let coords = parse_vector(&nu)?;
            if coords.len() != g.v1_dim() {
                bail!("--nu needs {} coordinates", g.v1_dim());
            }
            let v = g.embed_v1(&coords);
            let non_abnormal = is_nonabnormal(&g, &v)?;
            if json {
                let doc = serde_json::json!({
                    "schema": 1,
                    "name": name,
                    "nu": coords.iter().map(format_rat).collect::<Vec<_>>(),
                    "abnormal": !non_abnormal,
                });
                println!("{}", serde_json::to_string_pretty(&doc)?);
            } else {
                println!(
                    "{}",
                    if non_abnormal {
                        "NON_ABNORMAL"
                    } else {
                        "ABNORMAL"
                    }
                );
            }
            Ok(0)
        }
        Cmd::Simulate {
            file,
            lambda,
            count,
            word_length,
            seed,
            bound,
            denominator,
            threads,
        } => {
            let (_, g) = load_algebra(&file)?;
            let w = parse_lambda(&g, &lambda)?;
            let params = SampleParams {
                word_length,
                count,
                seed,
                bound,
                denominator,
            };
            let run = match threads {
                Some(t) => {
                    let pool = rayon::ThreadPoolBuilder::new()
                        .num_threads(t)
                        .build()
                        .context("building thread pool")?;
                    pool.install(|| sample_semigroup(&g, &w, &params, true))?
                }
                None => sample_semigroup(&g, &w, &params, false)?,
            };
            println!("{}", serde_json::to_string_pretty(&run.to_wire())?);
            Ok(0)
        }
        Cmd::Verify { file, cert } => {
            let (_, g) = load_algebra(&file)?;
            let s = std::fs::read_to_string(&cert)
                .with_context(|| format!("reading {}", cert.display()))?;
            let wire: DecisionWire = serde_json::from_str(&s)?;
            let decision = decision_from_wire(&wire).map_err(|e| anyhow!(e))?;
            verify_certificate(&g, &decision)?;
            println!("CERTIFICATE OK: {} for {}", decision.verdict, wire.algebra);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    // dying quietly on a closed pipe is the right behavior for a CLI that
    // is routinely piped into `head` or `jq`
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
