use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::spec::Kind;

#[derive(Debug, Parser)]
#[command(name = "falva", version, about = "Fractional action-like variational calculus on uniform grids")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cresson (or Riemann-Liouville) derivative of a path or field
    Deriv(Flags),
    /// Weighted action of a path or field
    Action(Flags),
    /// Euler-Lagrange residual of a path or field
    Residual(Flags),
    /// Integrate the 1D Euler-Lagrange equation from initial data
    SolveIvp(Flags),
    /// Shooting solution of the 1D boundary-value problem
    SolveBvp(Flags),
    /// Direct minimization of the discrete 1D action
    Minimize(Flags),
    /// Run another kind once per alpha value
    Sweep(SweepFlags),
}

impl Command {
    pub fn kind_and_flags(&self) -> (Kind, &Flags, Option<Kind>) {
        match self {
            Command::Deriv(f) => (Kind::Deriv, f, None),
            Command::Action(f) => (Kind::Action, f, None),
            Command::Residual(f) => (Kind::Residual, f, None),
            Command::SolveIvp(f) => (Kind::SolveIvp, f, None),
            Command::SolveBvp(f) => (Kind::SolveBvp, f, None),
            Command::Minimize(f) => (Kind::Minimize, f, None),
            Command::Sweep(s) => (Kind::Sweep, &s.flags, s.of),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
}

#[derive(Debug, Args, Default)]
pub struct Flags {
    /// key=value problem file; flags override its keys
    #[arg(long, value_name = "FILE")]
    pub spec: Option<PathBuf>,
    #[arg(long, short = 'l', value_name = "EXPR", allow_hyphen_values = true)]
    pub lagrangian: Option<String>,
    /// scalar or comma list (one per axis, or the sweep values)
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, value_name = "LIST")]
    pub beta: Option<String>,
    #[arg(long, value_name = "LIST")]
    pub delta: Option<String>,
    #[arg(long, value_name = "LIST")]
    pub chi: Option<String>,
    /// RE,IM or one of i, -i
    #[arg(long, value_name = "GAMMA", allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// LO,HI for one axis; repeat for x, y, z
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub domain: Vec<String>,
    /// cells per axis; repeat or give a comma list
    #[arg(long, value_name = "INT")]
    pub n: Vec<String>,
    /// path q (or sampled f for deriv) as an expression of tau, or x, y, z
    #[arg(long, visible_alias = "f", value_name = "EXPR", allow_hyphen_values = true)]
    pub path: Option<String>,
    /// exact derivative of the path, as an expression of tau
    #[arg(long, value_name = "EXPR", allow_hyphen_values = true)]
    pub qdot: Option<String>,
    /// sampled path or field file
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    /// NAME=VALUE constant substituted into the expressions; repeatable
    #[arg(long = "param", value_name = "NAME=VALUE", allow_hyphen_values = true)]
    pub params: Vec<String>,
    /// plain or cresson (1D only)
    #[arg(long, value_name = "FORM")]
    pub form: Option<String>,
    /// QA,QB
    #[arg(long, value_name = "QA,QB", allow_hyphen_values = true)]
    pub boundary: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub q0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub v0: Option<String>,
    /// weight-left or weight-right
    #[arg(long, value_name = "CONVENTION")]
    pub convention: Option<String>,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct SweepFlags {
    /// kind evaluated for every alpha
    #[arg(long, value_enum)]
    pub of: Option<Kind>,
    #[command(flatten)]
    pub flags: Flags,
}
