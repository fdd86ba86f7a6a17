//! Command-line front end: classify, fit, decompose, perturb, gen, and qz
//! workflows over tensor files, with deterministic seeded generation and
//! re-verifiable reports.

pub mod io;
pub mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gsdfit::classify::{
    boundary_perturbation, classify_general, classify_square, RankRegionOptions, RegionCase,
};
use gsdfit::gen::{generate_instance, InstanceKind};
use gsdfit::gsd::{best_gsd_fit, extract_cp_interior, full_gsd_singular_pencil, FitOptions};
use gsdfit::pencil::{is_singular_pencil, real_qz, QzOptions};
use gsdfit::Tensor3;
use report::{
    cp_payload, fit_payload, general_payload, qz_payload, BatchEntry, ClassificationRepr,
    GsdRepr, MatrixRepr, Payload, PerturbationPlanRepr, Report, Tolerances,
};

/// Errors carry the exit code contract: 1 for computation errors, 2 for
/// usage errors.
#[derive(Debug)]
pub struct CliError {
    pub message: String,
    pub exit_code: i32,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl CliError {
    pub fn computation(message: String) -> Self {
        Self {
            message,
            exit_code: 1,
        }
    }

    pub fn usage(message: String) -> Self {
        Self {
            message,
            exit_code: 2,
        }
    }

    pub fn from_core(e: gsdfit::Error) -> Self {
        Self::computation(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "gsdfit",
    about = "Generalized Schur decompositions and rank-region classification for I x J x 2 arrays",
    version
)]
pub struct Cli {
    #[command(flatten)]
    pub globals: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Eigenvalue distinctness / membership tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Identically-singular-pencil detection tolerance.
    #[arg(long = "sing-tol", global = true, default_value_t = 1e-10)]
    pub sing_tol: f64,
    /// Sweep cap for the fitting optimizer.
    #[arg(long = "max-sweeps", global = true, default_value_t = 500)]
    pub max_sweeps: usize,
    /// Random restarts for the fitting optimizer.
    #[arg(long, global = true, default_value_t = 8)]
    pub restarts: usize,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<String>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify an array: the interior/boundary/exterior trichotomy for
    /// square slices, closure membership when --rank is given.
    Classify {
        #[arg(long, required_unless_present = "batch", conflicts_with = "batch")]
        input: Option<String>,
        /// Classify every .json file in this directory.
        #[arg(long)]
        batch: Option<String>,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Best-fitting GSD at the given rank.
    Fit {
        #[arg(long)]
        input: String,
        #[arg(short = 'R', long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Decompose: CP factors for interior points, the constructive full
    /// GSD for identically singular pencils.
    Decompose {
        #[arg(long)]
        input: String,
        #[arg(long, value_enum, default_value_t = DecomposeMode::Auto)]
        mode: DecomposeMode,
    },
    /// Perturb an identically singular array into a nearby boundary (a2)
    /// point.
    Perturb {
        #[arg(long)]
        input: String,
        #[arg(long)]
        eps: f64,
    },
    /// Generate a seeded instance of a named kind.
    Gen {
        #[arg(long)]
        kind: String,
        /// Dimensions as I,J (K is always 2).
        #[arg(long, value_delimiter = ',')]
        dims: Vec<usize>,
        #[arg(long)]
        rank: usize,
        #[arg(long)]
        seed: u64,
        /// Also write the instance as a loadable tensor file.
        #[arg(long = "tensor-out")]
        tensor_out: Option<String>,
    },
    /// Real generalized Schur decomposition of the two slices.
    Qz {
        #[arg(long)]
        input: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeMode {
    Auto,
    Cp,
    Gsd,
}

/// Parse argv and run; returns the rendered report or an error carrying
/// the exit code. `argv` excludes the program name.
pub fn run_capture(argv: &[&str]) -> Result<String, CliError> {
    let mut full = vec!["gsdfit"];
    full.extend_from_slice(argv);
    let cli = Cli::try_parse_from(full).map_err(|e| CliError::usage(e.to_string()))?;
    let command_echo = std::iter::once("gsdfit".to_string())
        .chain(argv.iter().map(|s| s.to_string()))
        .collect::<Vec<_>>()
        .join(" ");
    let report = execute(&cli, command_echo)?;
    let rendered = match cli.globals.format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
    };
    if let Some(path) = &cli.globals.output {
        std::fs::write(path, &rendered)
            .map_err(|e| CliError::computation(format!("cannot write {path}: {e}")))?;
        Ok(String::new())
    } else {
        Ok(rendered)
    }
}

fn fit_options(g: &GlobalOpts, seed: u64) -> FitOptions {
    FitOptions {
        max_sweeps: g.max_sweeps,
        tol: 1e-12,
        restarts: g.restarts,
        seed,
    }
}

fn region_options(g: &GlobalOpts) -> RankRegionOptions {
    RankRegionOptions {
        tol: g.tol,
        sing_tol: g.sing_tol,
    }
}

fn tolerances(g: &GlobalOpts) -> Tolerances {
    Tolerances {
        tol: g.tol,
        sing_tol: g.sing_tol,
        max_sweeps: g.max_sweeps,
        restarts: g.restarts,
    }
}

fn execute(cli: &Cli, command_echo: String) -> Result<Report, CliError> {
    let g = &cli.globals;
    match &cli.command {
        Command::Classify { input, batch, rank } => {
            if let Some(dir) = batch {
                return classify_batch(g, dir, *rank, command_echo);
            }
            let path = input.as_ref().expect("clap enforces input xor batch");
            let y = io::parse_tensor_file(path)?;
            let digest = io::tensor_digest(&y);
            let payload = classify_payload(g, &y, *rank)?;
            Ok(Report {
                command: command_echo,
                input_digest: Some(digest),
                seed: None,
                tolerances: tolerances(g),
                payload,
            })
        }
        Command::Fit { input, rank, seed } => {
            let y = io::parse_tensor_file(input)?;
            let digest = io::tensor_digest(&y);
            let (d, rep) =
                best_gsd_fit(&y, *rank, &fit_options(g, *seed)).map_err(CliError::from_core)?;
            Ok(Report {
                command: command_echo,
                input_digest: Some(digest),
                seed: Some(*seed),
                tolerances: tolerances(g),
                payload: fit_payload(*rank, y.frobenius_norm(), &d, &rep),
            })
        }
        Command::Decompose { input, mode } => {
            let y = io::parse_tensor_file(input)?;
            let digest = io::tensor_digest(&y);
            let payload = decompose_payload(g, &y, *mode)?;
            Ok(Report {
                command: command_echo,
                input_digest: Some(digest),
                seed: None,
                tolerances: tolerances(g),
                payload,
            })
        }
        Command::Perturb { input, eps } => {
            let y = io::parse_tensor_file(input)?;
            let digest = io::tensor_digest(&y);
            let payload = perturb_payload(g, &y, *eps)?;
            Ok(Report {
                command: command_echo,
                input_digest: Some(digest),
                seed: None,
                tolerances: tolerances(g),
                payload,
            })
        }
        Command::Gen {
            kind,
            dims,
            rank,
            seed,
            tensor_out,
        } => {
            let kind_parsed = InstanceKind::parse(kind).ok_or_else(|| {
                CliError::usage(format!(
                    "unknown kind {kind:?}; expected one of interior, boundary-a2, exterior, \
                     singular-pencil, gsd-random, cp-random"
                ))
            })?;
            if dims.len() != 2 {
                return Err(CliError::usage(format!(
                    "--dims takes I,J (two values), got {dims:?}"
                )));
            }
            let y = generate_instance(kind_parsed, dims[0], dims[1], *rank, *seed)
                .map_err(CliError::from_core)?;
            let self_check = gen_self_check(g, kind_parsed, &y, *rank)?;
            if let Some(path) = tensor_out {
                std::fs::write(path, io::emit_tensor(&y))
                    .map_err(|e| CliError::computation(format!("cannot write {path}: {e}")))?;
            }
            Ok(Report {
                command: command_echo,
                input_digest: Some(io::tensor_digest(&y)),
                seed: Some(*seed),
                tolerances: tolerances(g),
                payload: Payload::Gen {
                    instance_kind: kind_parsed.name().to_string(),
                    dims: vec![dims[0], dims[1], 2],
                    rank: *rank,
                    tensor: io::TensorFile::from_tensor(&y),
                    self_check,
                },
            })
        }
        Command::Qz { input } => {
            let y = io::parse_tensor_file(input)?;
            let digest = io::tensor_digest(&y);
            let (i, j, _) = y.dims();
            if i != j {
                return Err(CliError::computation(format!(
                    "qz needs square slices, got {i}x{j}"
                )));
            }
            let y1 = y.frontal_slice(0).map_err(CliError::from_core)?;
            let y2 = y.frontal_slice(1).map_err(CliError::from_core)?;
            let singular =
                is_singular_pencil(&y1, &y2, g.sing_tol).map_err(CliError::from_core)?;
            let qz = real_qz(&y1, &y2, &QzOptions::default()).map_err(CliError::from_core)?;
            Ok(Report {
                command: command_echo,
                input_digest: Some(digest),
                seed: None,
                tolerances: tolerances(g),
                payload: qz_payload(&qz, singular),
            })
        }
    }
}

fn classify_payload(g: &GlobalOpts, y: &Tensor3, rank: Option<usize>) -> Result<Payload, CliError> {
    let (i, j, _) = y.dims();
    match rank {
        Some(r) => {
            let general = classify_general(y, r, g.tol, &fit_options(g, 0), &region_options(g))
                .map_err(CliError::from_core)?;
            Ok(general_payload(r, &general))
        }
        None => {
            if i != j {
                return Err(CliError::computation(format!(
                    "the square trichotomy needs I = J (got {i}x{j}); pass --rank for closure \
                     membership"
                )));
            }
            let c = classify_square(y, &region_options(g)).map_err(CliError::from_core)?;
            Ok(Payload::Classify(ClassificationRepr::from(&c)))
        }
    }
}

fn classify_batch(
    g: &GlobalOpts,
    dir: &str,
    rank: Option<usize>,
    command_echo: String,
) -> Result<Report, CliError> {
    if rank.is_some() {
        return Err(CliError::usage(
            "--batch supports only the square trichotomy (drop --rank)".to_string(),
        ));
    }
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .map_err(|e| CliError::computation(format!("cannot read directory {dir}: {e}")))?
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut reports = Vec::new();
    for path in files {
        let text = path.to_string_lossy().to_string();
        let y = io::parse_tensor_file(&text)?;
        let c = classify_square(&y, &region_options(g)).map_err(CliError::from_core)?;
        reports.push(BatchEntry {
            file: text,
            digest: io::tensor_digest(&y),
            classification: ClassificationRepr::from(&c),
        });
    }
    Ok(Report {
        command: command_echo,
        input_digest: None,
        seed: None,
        tolerances: tolerances(g),
        payload: Payload::ClassifyBatch { reports },
    })
}

fn decompose_payload(g: &GlobalOpts, y: &Tensor3, mode: DecomposeMode) -> Result<Payload, CliError> {
    let (i, j, _) = y.dims();
    if i != j {
        return Err(CliError::computation(format!(
            "decompose needs square slices, got {i}x{j}; use fit for rectangular arrays"
        )));
    }
    let y1 = y.frontal_slice(0).map_err(CliError::from_core)?;
    let y2 = y.frontal_slice(1).map_err(CliError::from_core)?;
    let singular = is_singular_pencil(&y1, &y2, g.sing_tol).map_err(CliError::from_core)?;
    let go_gsd = match mode {
        DecomposeMode::Gsd => true,
        DecomposeMode::Cp => false,
        DecomposeMode::Auto => singular,
    };
    if go_gsd {
        let d = full_gsd_singular_pencil(y, g.sing_tol).map_err(CliError::from_core)?;
        let residual =
            gsdfit::frobenius_distance(y, &d.reconstruct()).map_err(CliError::from_core)?;
        Ok(Payload::DecomposeGsd {
            gsd: GsdRepr::from(&d),
            residual,
        })
    } else {
        let f = extract_cp_interior(y, g.tol).map_err(CliError::from_core)?;
        Ok(cp_payload(&f, y))
    }
}

fn perturb_payload(g: &GlobalOpts, y: &Tensor3, eps: f64) -> Result<Payload, CliError> {
    let d = full_gsd_singular_pencil(y, g.sing_tol).map_err(CliError::from_core)?;
    let (h1_core, h2_core, plan) =
        boundary_perturbation(d.r1(), d.r2(), eps, g.sing_tol).map_err(CliError::from_core)?;
    // Map the perturbed triangular pair back through the orthonormal
    // factors: the result stays within eps of the input.
    let qbt = d.qb().transpose();
    let h1 = d.qa().matmul(&h1_core).matmul(&qbt);
    let h2 = d.qa().matmul(&h2_core).matmul(&qbt);
    let perturbed = Tensor3::from_slices(&h1, &h2).map_err(CliError::from_core)?;
    let reclass = classify_square(&perturbed, &region_options(g)).map_err(CliError::from_core)?;
    Ok(Payload::Perturb {
        h1: MatrixRepr::from(&h1_core),
        h2: MatrixRepr::from(&h2_core),
        perturbed: io::TensorFile::from_tensor(&perturbed),
        plan: PerturbationPlanRepr::from(&plan),
        reclassified: ClassificationRepr::from(&reclass),
    })
}

/// Generators assert their advertised class before the instance leaves
/// the process.
fn gen_self_check(
    g: &GlobalOpts,
    kind: InstanceKind,
    y: &Tensor3,
    rank: usize,
) -> Result<String, CliError> {
    let opts = region_options(g);
    let verdict = match kind {
        InstanceKind::Interior => {
            let c = classify_square(y, &opts).map_err(CliError::from_core)?;
            (c.case == RegionCase::A1, format!("case {}", report::case_name(c.case)))
        }
        InstanceKind::BoundaryA2 => {
            let c = classify_square(y, &opts).map_err(CliError::from_core)?;
            (c.case == RegionCase::A2, format!("case {}", report::case_name(c.case)))
        }
        InstanceKind::Exterior => {
            let c = classify_square(y, &opts).map_err(CliError::from_core)?;
            (c.case == RegionCase::A3, format!("case {}", report::case_name(c.case)))
        }
        InstanceKind::SingularPencil => {
            let y1 = y.frontal_slice(0).map_err(CliError::from_core)?;
            let y2 = y.frontal_slice(1).map_err(CliError::from_core)?;
            let s = is_singular_pencil(&y1, &y2, g.sing_tol).map_err(CliError::from_core)?;
            (s, format!("identically singular: {s}"))
        }
        InstanceKind::GsdRandom | InstanceKind::CpRandom => {
            let (member, residual) =
                gsdfit::gsd::closure_membership(y, rank, g.tol.max(1e-6), &fit_options(g, 1))
                    .map_err(CliError::from_core)?;
            (member, format!("fit residual {residual:.3e}"))
        }
    };
    if !verdict.0 {
        return Err(CliError::computation(format!(
            "generator self-check failed for kind {}: {}",
            kind.name(),
            verdict.1
        )));
    }
    Ok(format!("ok ({})", verdict.1))
}
