use crate::report::Format;
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "qcpn", version, about = "Exact and numerical checks for quantum projective spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct GlobalArgs {
    /// Emit JSON.
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Emit CSV.
    #[arg(long, global = true)]
    pub csv: bool,
    /// key = value file with defaults for q, M, L, tol, threads.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Evaluation point q0 in (0, 1].
    #[arg(long = "q", global = true, value_name = "Q0")]
    pub q0: Option<f64>,
    /// Fock-space truncation for the sphere representations.
    #[arg(long = "M", global = true)]
    pub m_max: Option<u32>,
    /// Peter-Weyl truncation l <= L for SU_q(2).
    #[arg(long = "L", global = true)]
    pub l_max: Option<f64>,
    /// Pass/fail tolerance (each command has its own default).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Add wall time to the report metadata (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

impl GlobalArgs {
    pub fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else if self.csv {
            Format::Csv
        } else {
            Format::Table
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    Normalize {
        expr: String,
        /// Sphere level n (generators z0..zn).
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Exact and numerical identity checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Fredholm pairings <[F_k], [P_-N]> against C(N, k).
    Pairing {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long = "N", default_value = "0..4")]
        big_n: String,
        #[arg(long, default_value = "0..2")]
        k: String,
    },
    /// Index of the twisted Dirac operator on the quantum sphere.
    Index {
        #[arg(long, default_value = "1/2..9/2")]
        j: String,
        /// Skip the numeric rank computation.
        #[arg(long)]
        no_numeric: bool,
    },
    /// Spectrum of D_j^2 and the Casimir blocks.
    Spectrum {
        #[arg(long, default_value = "1/2")]
        j: String,
    },
    /// Dimension of holomorphic sections of Gamma_N.
    HoloDim {
        #[arg(long = "N", default_value = "-4..2", allow_hyphen_values = true)]
        big_n: String,
    },
    /// Pairing of the twisted cyclic cocycle tau_1 with (P'_N, sigma^N).
    Tau1 {
        #[arg(long = "N", default_value = "0..2", allow_hyphen_values = true)]
        big_n: String,
    },
    /// Closed-form identities; with --table, emit a CSV table instead.
    Identities {
        /// Largest N and k in the exact checks.
        #[arg(long, default_value_t = 10)]
        max: u64,
        #[arg(long, value_enum)]
        table: Option<Table>,
        /// Level for the pairing and Chern tables.
        #[arg(long, default_value_t = 4)]
        n: usize,
    },
    /// Convert between phi_k and Ch_k.
    Chern {
        /// Comma-separated phi_0,..,phi_n.
        #[arg(long, conflicts_with_all = ["ch", "line"], allow_hyphen_values = true)]
        phi: Option<String>,
        /// Comma-separated Ch_0,..,Ch_n.
        #[arg(long, conflicts_with = "line", allow_hyphen_values = true)]
        ch: Option<String>,
        /// Line bundle L_-N given by phi_j = C(N, j).
        #[arg(long = "line", value_name = "N")]
        line: Option<u64>,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Psi^dag Psi = 1, P^2 = P = P^dag and the q-trace of P_1.
    Projections {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "Nmax", default_value_t = 3)]
        n_max: u32,
    },
    /// The defining relations normalize to zero.
    Relations {
        #[arg(long, default_value_t = 1)]
        n: usize,
    },
    /// Covariance of P'_N under all U_q generators.
    Equivariance {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long = "Nmax", default_value_t = 3)]
        n_max: u32,
    },
    /// Real spectral triple axioms on the interior window.
    Triple {
        #[arg(long, default_value = "1/2")]
        j: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Lambda,
    Pairing,
    Chern,
}
