use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use phemotion_ai::{ConfigError, Pipeline, PipelineError, ProviderConfig, ProviderKind};
use phemotion_core::geometry::generate_legend;
use phemotion_core::{
    generate_mesh, read_manifest, write_obj, ExportError, GeometryError, ModelError,
};
use serde_json::json;

use crate::api::{router, spawn_sweeper, AppState};
use crate::config::ServerConfig;
use crate::error::ApiError;

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PROVIDER: i32 = 3;
pub const EXIT_SCHEMA: i32 = 4;
pub const EXIT_IO: i32 = 5;

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    pub fn provider(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_PROVIDER,
            message: message.to_string(),
        }
    }

    pub fn schema(message: impl fmt::Display) -> Self {
        CliError {
            code: EXIT_SCHEMA,
            message: message.to_string(),
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError {
            code: EXIT_IO,
            message: format!("{}: {e}", path.display()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::schema(e)
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::schema(e)
    }
}

impl From<ExportError> for CliError {
    fn from(e: ExportError) -> Self {
        CliError::schema(e)
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::provider(e)
    }
}

impl From<PipelineError> for CliError {
    fn from(e: PipelineError) -> Self {
        match e {
            PipelineError::InvalidInput(m) => CliError::usage(m),
            other => CliError::provider(other),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "phemotion",
    version,
    about = "Turn emotional narratives into printable shapes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProviderChoice {
    Mock,
    Remote,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regenerate the mesh described by an exported manifest.
    Render {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Override the manifest's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Override the manifest's subdivision level.
        #[arg(long)]
        subdiv: Option<u8>,
    },
    /// Suggest emotion tokens for a transcript.
    Extract {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long, value_enum, default_value = "mock")]
        provider: ProviderChoice,
        /// Seed for the mock provider.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Score given emotions against a transcript.
    Score {
        #[arg(long)]
        transcript: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        labels: Vec<String>,
        #[arg(long, value_enum, default_value = "mock")]
        provider: ProviderChoice,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the attribute legend grid as OBJ files plus layout.json.
    Legend {
        #[arg(long)]
        rows: u32,
        #[arg(long)]
        cols: u32,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        subdiv: u8,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Override the configured bind address.
        #[arg(long)]
        bind: Option<String>,
    },
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::io(path, e))
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    std::fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read(path)?)
        .map_err(|_| CliError::usage(format!("{} is not UTF-8", path.display())))
}

fn pipeline_for(choice: ProviderChoice, seed: u64) -> Result<Pipeline, CliError> {
    let config = match choice {
        ProviderChoice::Mock => ProviderConfig::mock(seed),
        ProviderChoice::Remote => ProviderConfig {
            kind: ProviderKind::Remote,
            endpoint: None,
            ..ProviderConfig::mock(seed)
        },
    };
    Ok(Pipeline::new(config.build_from_env()?, config.max_retries))
}

fn print_json(value: &impl serde::Serialize) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

/// Runs one command; returns the process exit code.
pub async fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command).await {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

async fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Render {
            manifest,
            out,
            seed,
            subdiv,
        } => {
            let (_, mut spec) = read_manifest::<f64>(&read(&manifest)?)?;
            if let Some(seed) = seed {
                spec.seed = seed;
            }
            if let Some(s) = subdiv {
                spec.subdivision = s;
            }
            spec.validate()?;
            write(&out, &write_obj(&generate_mesh(&spec)?)?)
        }
        Command::Extract {
            transcript,
            provider,
            seed,
        } => {
            let text = read_text(&transcript)?;
            let result = pipeline_for(provider, seed)?.extract_tokens(&text).await?;
            print_json(&result);
            Ok(())
        }
        Command::Score {
            transcript,
            labels,
            provider,
            seed,
        } => {
            let text = read_text(&transcript)?;
            let labels: Vec<String> = labels.into_iter().map(|l| l.trim().to_owned()).collect();
            let tokens = pipeline_for(provider, seed)?
                .score_intensity(&text, &labels)
                .await?;
            print_json(&json!({ "tokens": tokens }));
            Ok(())
        }
        Command::Legend {
            rows,
            cols,
            out,
            seed,
            subdiv,
        } => {
            let grid = generate_legend::<f64>(rows, cols, seed, subdiv)?;
            std::fs::create_dir_all(&out).map_err(|e| CliError::io(&out, e))?;
            let mut cells = Vec::with_capacity(grid.len());
            for (cell, mesh) in grid {
                let path = out.join(format!("legend_r{}_c{}.obj", cell.row, cell.col));
                write(&path, &write_obj(&mesh)?)?;
                cells.push(cell);
            }
            let layout = json!({ "rows": rows, "cols": cols, "cells": cells });
            let mut bytes = serde_json::to_vec_pretty(&layout).expect("serializable");
            bytes.push(b'\n');
            write(&out.join("layout.json"), &bytes)
        }
        Command::Serve { config, bind } => serve(config, bind).await,
    }
}

async fn serve(config_path: Option<PathBuf>, bind: Option<String>) -> Result<(), CliError> {
    let mut config = match &config_path {
        Some(p) => ServerConfig::load(p)?,
        None => ServerConfig::default(),
    };
    if let Some(b) = bind {
        config.bind = b;
    }
    let pipeline = match &config.provider {
        Some(pc) => Some(Pipeline::new(pc.build_from_env()?, pc.max_retries)),
        None => None,
    };
    let listener = tokio::net::TcpListener::bind(&config.bind)
        .await
        .map_err(|e| CliError {
            code: EXIT_IO,
            message: format!("bind {}: {e}", config.bind),
        })?;
    let addr = listener.local_addr().map_err(|e| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    })?;
    let state = Arc::new(AppState::new(config, pipeline));
    tracing::info!(%addr, mode = state.mode(), "serving");
    let sweeper = spawn_sweeper(state.clone());
    println!("phemotion listening on http://{addr}");
    let served = axum::serve(listener, router(state))
        .with_graceful_shutdown(shutdown_signal())
        .await;
    sweeper.abort();
    served.map_err(|e| CliError {
        code: EXIT_IO,
        message: e.to_string(),
    })
}

async fn shutdown_signal() {
    let ctrl_c = async {
        let _ = tokio::signal::ctrl_c().await;
    };
    #[cfg(unix)]
    let term = async {
        match tokio::signal::unix::signal(tokio::signal::unix::SignalKind::terminate()) {
            Ok(mut s) => {
                s.recv().await;
            }
            Err(_) => std::future::pending::<()>().await,
        }
    };
    #[cfg(not(unix))]
    let term = std::future::pending::<()>();
    tokio::select! {
        _ = ctrl_c => {},
        _ = term => {},
    }
}

impl From<ApiError> for CliError {
    fn from(e: ApiError) -> Self {
        match e {
            ApiError::BadRequest { message, .. } => CliError::schema(message),
            ApiError::ProviderDisabled
            | ApiError::ProviderUnavailable
            | ApiError::ProviderOutput(_) => CliError::provider(e),
            other => CliError {
                code: 1,
                message: other.to_string(),
            },
        }
    }
}
