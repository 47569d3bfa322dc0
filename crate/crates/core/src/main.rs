use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use pauli_susy::report::{
    catalog_list, cmd_analyze, cmd_run, cmd_spectrum, cmd_verify, dump_operator, DumpTarget, FieldSource,
    OutputFormat, RunConfig, RunError,
};
use pauli_susy::Boundary;

#[derive(Parser, Debug)]
#[command(name = "pauli-susy", version, about = "Lattice certification of extended supersymmetry for the Pauli Hamiltonian")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parity signature of the vector potential and predicted N
    Analyze(Common),
    /// Certify the superalgebra on the lattice
    Verify(Common),
    /// Dense spectrum of H and the degeneracy law
    Spectrum(Common),
    /// Run the stages listed in the config (default: all three)
    Run(Common),
    /// Built-in field configurations
    Catalog {
        #[command(subcommand)]
        action: CatalogAction,
    },
    /// Write Q0 or H as sparse triplets
    Dump {
        #[arg(value_enum)]
        operator: DumpArg,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogAction {
    /// One JSON object per field
    List {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum DumpArg {
    Q0,
    H,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum BcArg {
    Dirichlet,
    Periodic,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON run configuration; flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
    /// Catalog field name (free, solenoid, wire, octopole)
    #[arg(long, conflicts_with = "field")]
    builtin: Option<String>,
    /// JSON field file with name, params and A
    #[arg(long)]
    field: Option<PathBuf>,
    /// Override a builtin parameter, e.g. --param delta=0.05
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Points per axis: M or Mx,My,Mz (odd, at least 3)
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    grid: Option<Vec<usize>>,
    /// Spacing: h or hx,hy,hz
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    spacing: Option<Vec<f64>>,
    #[arg(long, value_enum)]
    bc: Option<BcArg>,
    #[arg(long)]
    tol_adm: Option<f64>,
    #[arg(long)]
    tol_algebra: Option<f64>,
    #[arg(long)]
    cluster_tol: Option<f64>,
    #[arg(long)]
    zero_tol: Option<f64>,
    #[arg(long)]
    parity_tol: Option<f64>,
    /// Parity sampler seed (decimal or 0x-prefixed hex)
    #[arg(long, value_parser = parse_seed)]
    seed: Option<u64>,
    /// Parity sampler point count
    #[arg(long)]
    samples: Option<usize>,
    /// Parity sampler box half-width
    #[arg(long = "box")]
    half_width: Option<f64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected KEY=VALUE, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|e| format!("bad value for `{k}`: {e}"))?;
    Ok((k.trim().to_string(), v))
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

fn triple<T: Copy>(name: &str, v: &[T]) -> Result<[T; 3], RunError> {
    match *v {
        [a] => Ok([a; 3]),
        [a, b, c] => Ok([a, b, c]),
        _ => Err(RunError::Usage(format!("--{name} takes 1 or 3 comma-separated values"))),
    }
}

impl Common {
    fn config(&self) -> Result<RunConfig, RunError> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| RunError::Usage(format!("cannot read {}: {e}", path.display())))?;
                RunConfig::from_json(&text)?
            }
            None => RunConfig::default(),
        };
        if let Some(name) = &self.builtin {
            cfg.field = FieldSource::Builtin(name.clone());
        }
        if let Some(path) = &self.field {
            cfg.field = FieldSource::File(path.clone());
        }
        cfg.params.extend(self.params.iter().cloned());
        if let Some(g) = &self.grid {
            cfg.grid.points = triple("grid", g)?;
        }
        if let Some(h) = &self.spacing {
            cfg.grid.spacing = triple("spacing", h)?;
        }
        if let Some(bc) = self.bc {
            cfg.grid.bc = match bc {
                BcArg::Dirichlet => Boundary::Dirichlet,
                BcArg::Periodic => Boundary::Periodic,
            };
        }
        let t = &mut cfg.tolerances;
        for (slot, value) in [
            (&mut t.admissibility, self.tol_adm),
            (&mut t.algebra, self.tol_algebra),
            (&mut t.cluster_rel, self.cluster_tol),
            (&mut t.zero, self.zero_tol),
            (&mut t.parity, self.parity_tol),
        ] {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(seed) = self.seed {
            cfg.sampler.seed = seed;
        }
        if let Some(n) = self.samples {
            cfg.sampler.count = n;
        }
        if let Some(w) = self.half_width {
            cfg.sampler.half_width = w;
        }
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Json => OutputFormat::Json,
                FormatArg::Text => OutputFormat::Text,
            };
        }
        Ok(cfg)
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), RunError> {
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<i32, RunError> {
    let (common, driver): (&Common, fn(&RunConfig) -> _) = match &cli.command {
        Command::Analyze(c) => (c, cmd_analyze),
        Command::Verify(c) => (c, cmd_verify),
        Command::Spectrum(c) => (c, cmd_spectrum),
        Command::Run(c) => (c, cmd_run),
        Command::Catalog {
            action: CatalogAction::List { out },
        } => {
            emit(out.as_ref(), &catalog_list())?;
            return Ok(0);
        }
        Command::Dump { operator, common } => {
            let target = match operator {
                DumpArg::Q0 => DumpTarget::Q0,
                DumpArg::H => DumpTarget::Hamiltonian,
            };
            let text = dump_operator(&common.config()?, target)?;
            emit(common.out.as_ref(), &text)?;
            return Ok(0);
        }
    };
    let cfg = common.config()?;
    let output = driver(&cfg)?;
    emit(common.out.as_ref(), output.render(cfg.format))?;
    Ok(output.exit_code)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
