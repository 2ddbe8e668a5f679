use std::net::SocketAddr;
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::Context;
use clap::Parser;
use semrank::{RunOptions, SessionStore};
use semrank_cli::api::{router, AppState};
use semrank_cli::args::{Cli, Command};
use semrank_cli::{build_pipeline, load_stopwords, load_wordnet, render};
use tracing_subscriber::EnvFilter;

async fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Expand { query } => {
            let config = semrank_cli::load_config(&cli.common)?;
            let wordnet = load_wordnet(&cli.common)?;
            let stopwords = load_stopwords(cli.common.stopwords.as_deref())?;
            let sv = semrank::expand_query(&wordnet, &query, &config.expansion, &stopwords)?;
            println!("{}", serde_json::to_string_pretty(&sv)?);
        }
        Command::Search {
            query,
            backend,
            json,
            table: _,
            sessions_dir,
        } => {
            let pipeline = build_pipeline(&cli.common, &backend)?;
            let opts = RunOptions::default();
            let session = match sessions_dir {
                Some(dir) => pipeline.run_session(&SessionStore::open(dir)?, &query, &opts).await?,
                None => pipeline.run(&query, &opts).await?,
            };
            if json {
                println!("{}", serde_json::to_string_pretty(&session)?);
            } else {
                print!("{}", render::session_table(&session));
            }
        }
        Command::Serve {
            port,
            bind,
            sessions_dir,
            ui_dir,
            backend,
        } => {
            let state = AppState {
                pipeline: Arc::new(build_pipeline(&cli.common, &backend)?),
                store: Arc::new(SessionStore::open(sessions_dir)?),
            };
            let addr: SocketAddr = format!("{bind}:{port}").parse().context("bad --bind/--port")?;
            let listener = tokio::net::TcpListener::bind(addr)
                .await
                .with_context(|| format!("cannot listen on {addr}"))?;
            if !ui_dir.is_dir() {
                tracing::warn!(dir = %ui_dir.display(), "UI bundle not found; serving the API only");
            }
            tracing::info!(%addr, "listening");
            axum::serve(listener, router(state, Some(&ui_dir)))
                .with_graceful_shutdown(async {
                    let _ = tokio::signal::ctrl_c().await;
                })
                .await?;
        }
    }
    Ok(())
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(EnvFilter::try_from_default_env().unwrap_or_else(|_| EnvFilter::new("warn")))
        .with_writer(std::io::stderr)
        .init();
    let cli = Cli::parse();
    match run(cli).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
