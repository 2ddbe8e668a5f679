use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use semrank::vsm::QueryWeighting;
use semrank::wordnet::WORDNET_DIR_ENV;
use semrank::Engine;

#[derive(Debug, Parser)]
#[command(name = "semrank", version, about = "Semantic re-ranking of meta-search results")]
pub struct Cli {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// WordNet `dict/` directory holding the index.* and data.* files.
    #[arg(long, global = true, env = WORDNET_DIR_ENV)]
    pub wordnet_dir: Option<PathBuf>,
    /// Stopword file, one token per line; `#` starts a comment.
    #[arg(long, global = true)]
    pub stopwords: Option<PathBuf>,
    /// TOML configuration file.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory of per-engine extraction rules (`google.json`, ...).
    #[arg(long, global = true)]
    pub rules_dir: Option<PathBuf>,
    /// Results taken from each engine.
    #[arg(long, global = true)]
    pub top_n: Option<usize>,
    /// Synonym discount.
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    /// Hypernym discount.
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Query vector weighting: idf or uniform.
    #[arg(long, global = true)]
    pub query_weighting: Option<QueryWeighting>,
}

#[derive(Debug, Clone, Args)]
pub struct BackendArgs {
    /// Search a local corpus (directory with manifest.json) instead of the web.
    #[arg(long, conflicts_with = "fixtures")]
    pub offline: Option<PathBuf>,
    /// Replay recorded result pages (<engine>.html and pages.json) from a directory.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Engines to query. Without --fixtures this scrapes the live engines.
    #[arg(long, value_delimiter = ',', conflicts_with = "offline")]
    pub engines: Option<Vec<Engine>>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one search session and print the semantically ranked results.
    Search {
        query: String,
        #[command(flatten)]
        backend: BackendArgs,
        /// Print the full session as JSON.
        #[arg(long, conflicts_with = "table")]
        json: bool,
        /// Print a results table (the default).
        #[arg(long)]
        table: bool,
        /// Also persist the session here.
        #[arg(long)]
        sessions_dir: Option<PathBuf>,
    },
    /// Serve the JSON API and the web UI.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        /// Address to listen on.
        #[arg(long, default_value = "127.0.0.1")]
        bind: String,
        /// Where sessions are stored.
        #[arg(long, default_value = "sessions")]
        sessions_dir: PathBuf,
        /// Built UI bundle served under `/`.
        #[arg(long, default_value = "webui/dist")]
        ui_dir: PathBuf,
        #[command(flatten)]
        backend: BackendArgs,
    },
    /// Print the semantic vector of a query as JSON.
    Expand { query: String },
}
