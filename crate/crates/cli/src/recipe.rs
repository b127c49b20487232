//! Batch runs described by a TOML file:
//!
//! ```toml
//! description = "what the outputs show"
//! output_dir = "out/binomial"        # optional
//!
//! [[run]]
//! name = "o0.5"                       # output file stem
//! args = ["membership", "--family", "binomial", "--n", "10", "--o", "0.5",
//!         "--tau-grid", "0.001:0.999:999"]
//! ```
//!
//! Each run writes `<name>.csv` (or `.json`) unless its args carry
//! `--output`. The directory is `--output-dir`, else the recipe's
//! `output_dir` (relative to the recipe file), else `$FUZZYCI_OUTPUT_DIR`,
//! else the current directory.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use serde::Deserialize;

use crate::args::{Cli, Command, Format, OutputArgs, RecipeArgs, OUTPUT_DIR_ENV};
use crate::error::{CliError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Recipe {
    #[serde(default)]
    pub description: String,
    pub output_dir: Option<PathBuf>,
    #[serde(rename = "run")]
    pub runs: Vec<Run>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Run {
    pub name: String,
    pub args: Vec<String>,
}

pub fn load(path: &Path) -> Result<Recipe> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    toml::from_str(&text).map_err(|source| CliError::Recipe { path: path.into(), source })
}

fn output_args(command: &mut Command) -> Option<&mut OutputArgs> {
    match command {
        Command::Membership(a) => Some(&mut a.output),
        Command::ElCurve(a) | Command::LowerBound(a) => Some(&mut a.output),
        Command::Coverage(a) => Some(&mut a.output),
        Command::Knapsack(a) => Some(&mut a.output),
        Command::SelfTest(a) => Some(&mut a.output),
        Command::Recipe(_) => None,
    }
}

pub fn run(args: &RecipeArgs) -> Result<()> {
    let recipe = load(&args.file)?;
    let dir = match (&args.output_dir, &recipe.output_dir) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) if d.is_relative() => args.file.parent().unwrap_or(Path::new("")).join(d),
        (None, Some(d)) => d.clone(),
        (None, None) => std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from).unwrap_or_default(),
    };
    if !recipe.description.is_empty() {
        eprintln!("{}", recipe.description.trim());
    }
    for run in &recipe.runs {
        let argv = std::iter::once("fuzzyci".to_string()).chain(run.args.iter().cloned());
        let mut cli = Cli::try_parse_from(argv)
            .map_err(|e| CliError::usage(format!("recipe run {:?}: {}", run.name, e.render())))?;
        let out = output_args(&mut cli.command)
            .ok_or_else(|| CliError::usage(format!("recipe run {:?}: recipes cannot nest", run.name)))?;
        let file = match &out.output {
            Some(p) => p.clone(),
            None => PathBuf::from(format!(
                "{}.{}",
                run.name,
                if out.format == Format::Json { "json" } else { "csv" }
            )),
        };
        // Absolute, so the variable is not applied a second time.
        let target = if file.is_absolute() {
            file
        } else {
            let cwd = std::env::current_dir().map_err(|source| CliError::Io { path: ".".into(), source })?;
            cwd.join(&dir).join(file)
        };
        out.output = Some(target.clone());
        crate::dispatch(&cli.command)?;
        eprintln!("wrote {}", target.display());
    }
    Ok(())
}
