use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use dyq_core::suites::{self, load_gcm, parse_level, RunConfig};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Md,
}

/// Exact verification suites for hbar-deformed current algebras.
#[derive(Parser, Debug)]
#[command(name = "dyq", version)]
struct Args {
    /// JSON run configuration; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset (A1, A2, D4) or path to a JSON matrix {labels, matrix}.
    #[arg(long)]
    gcm: Option<String>,
    /// Level as a rational p/q.
    #[arg(long)]
    level: Option<String>,
    /// Checks hold modulo hbar^N.
    #[arg(long = "hbar-order")]
    hbar_order: Option<i64>,
    /// Degree window half-width.
    #[arg(long)]
    window: Option<i64>,
    /// Fock and vacuum module depth.
    #[arg(long)]
    depth: Option<usize>,
    /// Suite to run (repeatable); `none` selects no suites.
    #[arg(long = "suite")]
    suites: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    report: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Disable the kernel-expansion cache.
    #[arg(long = "no-cache")]
    no_cache: bool,
    #[arg(long = "list-suites")]
    list_suites: bool,
}

fn config(a: &Args) -> dyq_core::Result<RunConfig> {
    let mut c = match &a.config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| dyq_core::Error::Io(format!("{}: {}", p.display(), e)))?;
            RunConfig::from_json(&text).map_err(|e| dyq_core::Error::Config(format!("{}: {}", p.display(), e)))?
        }
        None => RunConfig::default(),
    };
    if let Some(g) = &a.gcm {
        c.gcm = load_gcm(g)?;
        c.gcm_source = g.clone();
    }
    if let Some(l) = &a.level {
        c.level = parse_level(l)?;
    }
    if let Some(n) = a.hbar_order {
        c.n = n;
    }
    if let Some(w) = a.window {
        c.window = w;
    }
    if let Some(d) = a.depth {
        c.depth = d;
    }
    if !a.suites.is_empty() {
        c.suites = a.suites.iter().filter(|s| s.as_str() != "none").cloned().collect();
    }
    if let Some(s) = a.seed {
        c.seed = s;
    }
    if a.no_cache {
        c.cache = false;
    }
    c.validate()?;
    Ok(c)
}

fn main() -> ExitCode {
    let a = Args::parse();
    if a.list_suites {
        for s in suites::registry() {
            let _ = writeln!(std::io::stdout(), "{:<22}{}  {}", s.name, if s.default { "default" } else { "       " }, s.about);
        }
        return ExitCode::SUCCESS;
    }
    let result = config(&a).and_then(|c| suites::run(&c));
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}", e);
            return ExitCode::from(2);
        }
    };
    let body = match a.report {
        Format::Json => report.to_json(),
        Format::Md => report.to_markdown(),
    };
    match &a.out {
        Some(p) => {
            if let Err(e) = std::fs::write(p, body + "\n") {
                eprintln!("error: {}: {}", p.display(), e);
                return ExitCode::from(2);
            }
        }
        None => {
            let _ = writeln!(std::io::stdout(), "{}", body);
        }
    }
    ExitCode::from(suites::exit_code(&report) as u8)
}
