//! The `dgmf` command line: validate bundles, run the pipeline, and write
//! factorizations and resolutions as JSON artifacts.

pub mod artifacts;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use dgmf_core::bundle::{bundle_file, read_bundle, to_json, LoadedBundle};
use dgmf_core::dg_solver::{complete_multiplication, SolverConfig};
use dgmf_core::dga::{validate_dga, DgaBundle};
use dgmf_core::factorization::{
    build_cone_l_rho, build_mf, build_resolution, verify_mf, FactorizationError, MfVariant, ResolutionVariant,
};
use dgmf_core::fixtures::{e1, e2, e3, Example};
use dgmf_core::linkage::{
    run_pipeline, verify_hypotheses, verify_identity_suite, verify_higher_multiplication, LinkageError, LinkageInput,
    LinkageOptions,
};
use dgmf_core::report::Report;
use dgmf_core::ring::check_regular_sequence;
use thiserror::Error;

use artifacts::{
    mf_variant_name, resolution_variant_name, write_atomic, MfFile, ResolutionFile, RunReport, StageReport, XFile,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "dgmf", version, about = "Matrix factorizations and periodic resolutions from linked DG algebras")]
pub struct Cli {
    /// Output directory for the run report and artifacts.
    #[arg(long, global = true, default_value = "./out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a bundle's DGΓ-algebra axioms and Poincaré duality.
    Validate {
        /// Bundle JSON file.
        bundle: PathBuf,
    },
    /// Run the pipeline on a bundle and write the requested artifacts.
    Build {
        /// Bundle JSON file.
        bundle: PathBuf,
        #[command(flatten)]
        flags: BuildFlags,
    },
    /// Run a built-in example; without flags, builds its natural artifacts.
    Demo {
        #[arg(value_enum)]
        example: DemoName,
        #[command(flatten)]
        flags: BuildFlags,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct BuildFlags {
    /// Build the full factorization (any r).
    #[arg(long)]
    pub mf1: bool,
    /// Build the reduced factorization (needs r a unit).
    #[arg(long)]
    pub mf2: bool,
    /// Build a resolution over P/(f).
    #[arg(long, value_enum)]
    pub resolution: Option<ResolutionKind>,
    /// Number of resolution differentials checked mod f.
    #[arg(long, default_value_t = 10)]
    pub check_len: usize,
    /// Complete a differentials-only bundle with the DG solver (seed from DGMF_SEED).
    #[arg(long)]
    pub solve_mult: bool,
    /// Also run the kernel-intersection checks (slower).
    #[arg(long)]
    pub syzygy_checks: bool,
}

impl BuildFlags {
    fn requests_artifacts(&self) -> bool {
        self.mf1 || self.mf2 || self.resolution.is_some()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ResolutionKind {
    #[value(name = "N", alias = "n")]
    N,
    #[value(name = "acute")]
    Acute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    #[value(name = "E1", alias = "e1")]
    E1,
    #[value(name = "E2", alias = "e2")]
    E2,
    #[value(name = "E3", alias = "e3")]
    E3,
}

/// Why a run stopped early.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("input error: {0}")]
    Input(String),
    #[error("{stage} failed: {detail}")]
    Failed { stage: String, detail: String },
    #[error("{stage}: precondition not met: {detail}")]
    Precondition { stage: String, detail: String },
}

impl RunError {
    fn failed(stage: &str, detail: impl ToString) -> Self {
        RunError::Failed { stage: stage.into(), detail: detail.to_string() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => EXIT_INPUT,
            RunError::Failed { .. } => EXIT_FAILURE,
            RunError::Precondition { .. } => EXIT_PRECONDITION,
        }
    }

    fn stage(&self) -> Option<String> {
        match self {
            RunError::Input(_) => None,
            RunError::Failed { stage, .. } | RunError::Precondition { stage, .. } => Some(stage.clone()),
        }
    }
}

/// Accumulates stage reports and artifacts for one run.
struct Run {
    out: PathBuf,
    report: RunReport,
}

impl Run {
    fn new(out: &Path, command: &str, input: String) -> Self {
        Run { out: out.to_path_buf(), report: RunReport { command: command.into(), input, ..RunReport::default() } }
    }

    /// Records a stage; a failing report stops the run at that stage.
    fn stage(&mut self, name: &str, r: Report) -> Result<(), RunError> {
        let first = r.failures().next().map(|c| format!("{}: {}", c.name, c.detail));
        println!("{name}: {}/{} checks passed", r.checks.iter().filter(|c| c.passed).count(), r.checks.len());
        for c in r.failures() {
            eprintln!("  FAILED {}: {}", c.name, c.detail);
        }
        self.report.stages.push(StageReport::from_report(name, r));
        match first {
            Some(d) => Err(RunError::failed(name, d)),
            None => Ok(()),
        }
    }

    fn write(&mut self, name: &str, contents: &str) -> Result<(), RunError> {
        write_atomic(&self.out, name, contents)
            .map_err(|e| RunError::Input(format!("cannot write {}: {e}", self.out.join(name).display())))?;
        self.report.artifacts.push(name.into());
        Ok(())
    }

    /// Writes report.json and returns the exit code.
    fn finish(mut self, result: Result<(), RunError>) -> i32 {
        let code = match &result {
            Ok(()) => EXIT_OK,
            Err(e) => e.exit_code(),
        };
        self.report.exit_code = code;
        self.report.status = match code {
            EXIT_OK => "ok",
            EXIT_FAILURE => "failed",
            EXIT_INPUT => "input_error",
            _ => "precondition",
        }
        .into();
        if let Err(e) = &result {
            eprintln!("error: {e}");
            self.report.failed_stage = e.stage();
            self.report.error = Some(e.to_string());
        }
        if let Err(e) = write_atomic(&self.out, "report.json", &to_json(&self.report)) {
            eprintln!("error: cannot write run report: {e}");
        }
        code
    }
}

pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { bundle } => {
            let mut run = Run::new(&cli.out, "validate", bundle.display().to_string());
            let result = validate(&mut run, &bundle);
            run.finish(result)
        }
        Command::Build { bundle, flags } => {
            let mut run = Run::new(&cli.out, "build", bundle.display().to_string());
            let result = load(&bundle).and_then(|b| build(&mut run, b, &flags));
            run.finish(result)
        }
        Command::Demo { example, flags } => {
            let mut run = Run::new(&cli.out, "demo", format!("{example:?}"));
            let result = demo(&mut run, example, flags);
            run.finish(result)
        }
    }
}

fn load(path: &Path) -> Result<LoadedBundle, RunError> {
    let text = fs::read_to_string(path).map_err(|e| RunError::Input(format!("cannot read {}: {e}", path.display())))?;
    read_bundle(&text).map_err(|e| RunError::Input(format!("{}: {e}", path.display())))
}

fn validate(run: &mut Run, path: &Path) -> Result<(), RunError> {
    let b = load(path)?;
    let m = b.m.as_ref().ok_or_else(|| RunError::Input("bundle has no multiplication table to validate".into()))?;
    let mut r = validate_dga(m, Some(&b.a));
    if b.options.check_regular {
        let regular = check_regular_sequence(&b.a).map_err(|e| RunError::Input(e.to_string()))?;
        r.push("regular_sequence", (!regular).then(|| "a is not a regular sequence".to_string()));
    }
    run.stage("validate", r)
}

fn solver_config(run: &mut Run) -> SolverConfig {
    let cfg = SolverConfig::from_env();
    run.report.seed = Some(cfg.seed);
    cfg
}

fn build(run: &mut Run, b: LoadedBundle, flags: &BuildFlags) -> Result<(), RunError> {
    let m: DgaBundle = match (b.m.clone(), flags.solve_mult) {
        (Some(m), solve) => {
            if solve {
                run.report.stages.push(StageReport {
                    name: "solve_mult".into(),
                    passed: true,
                    checks: Vec::new(),
                    notes: vec!["bundle supplies its multiplication; solver not run".into()],
                });
            }
            m
        }
        (None, true) => {
            let cfg = solver_config(run);
            let m = complete_multiplication(&b.complex, &b.orientation, &b.split, &cfg)
                .map_err(|e| RunError::failed("solve_mult", e))?;
            let opts = LinkageOptions { check_regular: b.options.check_regular };
            run.write("bundle.json", &to_json(&bundle_file(&b.vars, &b.a, &b.f, &m, &opts)))?;
            m
        }
        (None, false) => {
            return Err(RunError::Input("bundle has no multiplication table; pass --solve-mult to complete it".into()))
        }
    };
    let input = LinkageInput { a: b.a.clone(), f: b.f.clone(), m, options: b.options.clone() };
    build_input(run, &input, &b.vars, flags)
}

fn build_input(run: &mut Run, input: &LinkageInput, vars: &[String], flags: &BuildFlags) -> Result<(), RunError> {
    run.stage("validate", validate_dga(&input.m, Some(&input.a)))?;
    let st = run_pipeline(input).map_err(|e| match e {
        LinkageError::InvalidInput(d) => RunError::Input(d),
        other => RunError::failed("pipeline", other),
    })?;
    run.stage("hypotheses", verify_hypotheses(&st))?;
    run.write("x.json", &to_json(&XFile::new(&st.x.x, &st.x.x_dagger, vars)))?;
    run.stage("identity_suite", verify_identity_suite(&st, flags.syzygy_checks))?;
    run.stage("higher_multiplication", verify_higher_multiplication(&st))?;

    let mf_error = |stage: &str, e: FactorizationError| match e {
        e @ FactorizationError::RNotUnit(_) => RunError::Precondition { stage: stage.into(), detail: e.to_string() },
        other => RunError::failed(stage, other),
    };
    for (wanted, variant) in [(flags.mf1, MfVariant::Full), (flags.mf2, MfVariant::Reduced)] {
        if !wanted {
            continue;
        }
        let name = format!("mf_{}", mf_variant_name(variant));
        let mf = build_mf(&st, variant).map_err(|e| mf_error(&name, e))?;
        let mut r = verify_mf(&mf);
        if variant == MfVariant::Full {
            r.extend(build_cone_l_rho(&st).map_err(|e| mf_error(&name, e))?.report);
        }
        r.notes.push(format!("rank {}", mf.rank()));
        println!("{name}: rank {}", mf.rank());
        run.stage(&name, r)?;
        run.write(&format!("{name}.json"), &to_json(&MfFile::new(&mf, vars)))?;
    }
    if let Some(kind) = flags.resolution {
        let variant = match kind {
            ResolutionKind::N => ResolutionVariant::N,
            ResolutionKind::Acute => ResolutionVariant::Acute,
        };
        let name = format!("resolution_{}", resolution_variant_name(variant));
        let res = build_resolution(&st, variant, flags.check_len).map_err(|e| mf_error(&name, e))?;
        println!("{name}: ranks {:?}", res.ranks(flags.check_len));
        run.stage(&name, res.report.clone())?;
        run.write(&format!("{name}.json"), &to_json(&ResolutionFile::new(&res, flags.check_len, vars)))?;
    }
    Ok(())
}

/// The artifacts each example is meant to show when no flags are given.
fn demo_defaults(example: DemoName) -> BuildFlags {
    let base = BuildFlags { check_len: 10, ..BuildFlags::default() };
    match example {
        DemoName::E1 => BuildFlags { mf2: true, resolution: Some(ResolutionKind::Acute), ..base },
        DemoName::E2 => BuildFlags { mf1: true, resolution: Some(ResolutionKind::N), ..base },
        DemoName::E3 => BuildFlags { mf1: true, mf2: true, resolution: Some(ResolutionKind::N), ..base },
    }
}

fn demo(run: &mut Run, example: DemoName, flags: BuildFlags) -> Result<(), RunError> {
    let flags = if flags.requests_artifacts() {
        flags
    } else {
        BuildFlags { syzygy_checks: flags.syzygy_checks, check_len: flags.check_len, ..demo_defaults(example) }
    };
    let ex: Example = match example {
        DemoName::E1 => e1(),
        DemoName::E2 => e2(),
        DemoName::E3 => {
            let cfg = solver_config(run);
            e3(&cfg).map_err(|e| RunError::failed("solve_mult", e))?
        }
    };
    let input = ex.input();
    run.write("bundle.json", &to_json(&bundle_file(&ex.vars, &ex.a, &ex.f, &ex.m, &input.options)))?;
    build_input(run, &input, &ex.vars, &flags)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn build_flags_parse_with_defaults() {
        let cli = Cli::try_parse_from(["dgmf", "build", "b.json", "--mf2", "--resolution", "acute"]).unwrap();
        assert_eq!(cli.out, PathBuf::from("./out"));
        let Command::Build { bundle, flags } = cli.command else { panic!("expected build") };
        assert_eq!(bundle, PathBuf::from("b.json"));
        assert!(flags.mf2 && !flags.mf1 && !flags.solve_mult);
        assert_eq!((flags.resolution, flags.check_len), (Some(ResolutionKind::Acute), 10));
    }

    #[test]
    fn unknown_values_are_usage_errors() {
        assert!(Cli::try_parse_from(["dgmf", "demo", "E4"]).is_err());
        assert!(Cli::try_parse_from(["dgmf", "build", "b.json", "--resolution", "M"]).is_err());
    }

    #[test]
    fn demo_defaults_follow_the_example() {
        assert!(demo_defaults(DemoName::E1).mf2 && !demo_defaults(DemoName::E1).mf1);
        assert_eq!(demo_defaults(DemoName::E2).resolution, Some(ResolutionKind::N));
        assert!(demo_defaults(DemoName::E3).requests_artifacts());
    }

    #[test]
    fn errors_map_to_exit_codes() {
        assert_eq!(RunError::Input("x".into()).exit_code(), EXIT_INPUT);
        assert_eq!(RunError::failed("pipeline", "x").exit_code(), EXIT_FAILURE);
        let p = RunError::Precondition { stage: "mf_reduced".into(), detail: "x".into() };
        assert_eq!((p.exit_code(), p.stage().as_deref()), (EXIT_PRECONDITION, Some("mf_reduced")));
    }
}
