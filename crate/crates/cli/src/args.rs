use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use corset_core::Params;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    BuildCayley,
    BuildConed,
    BuildCusped,
    Delta,
    Bcp,
    Fineness,
    Qc5,
    TransitionQc,
    Qc3,
    Saturation,
    Induced,
    CloseCosets,
    Distortion,
    Closure,
    Sandwich,
}

impl Command {
    pub fn name(self) -> String {
        self.to_possible_value().expect("no skipped variants").get_name().to_string()
    }
}

/// Flags override the `params` block of the spec file.
#[derive(Debug, Parser)]
#[command(name = "corset", version, about = "Finite-ball diagnostics for relatively hyperbolic groups")]
pub struct Cli {
    pub command: Command,

    /// JSON run spec (group, peripherals, subgroups, params).
    #[arg(long)]
    pub spec: Option<PathBuf>,

    #[arg(long, default_value = "corset-out")]
    pub out: PathBuf,

    /// Worker thread cap.
    #[arg(long)]
    pub threads: Option<usize>,

    /// Vertex budget for every build.
    #[arg(long, env = "CORSET_BUDGET")]
    pub budget: Option<usize>,

    /// Replaces the first subgroup of the spec, e.g. "t,z" or "a b, A^2".
    #[arg(long)]
    pub subgroup: Option<String>,

    #[arg(long)]
    pub radius: Option<usize>,
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub margin: Option<usize>,
    #[arg(long)]
    pub epsilon: Option<usize>,
    #[arg(long = "R")]
    pub r: Option<usize>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long = "L", value_delimiter = ',')]
    pub l: Option<Vec<usize>>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    #[arg(long = "C-max")]
    pub c_max: Option<u64>,
    #[arg(long = "M")]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub ns: Option<Vec<usize>>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// exhaustive | sampled
    #[arg(long)]
    pub mode: Option<String>,
    /// thin-triangle | four-point
    #[arg(long)]
    pub method: Option<String>,
    /// cayley | coned | cusped
    #[arg(long)]
    pub space: Option<String>,
    #[arg(long)]
    pub pair_threshold: Option<u64>,
    #[arg(long)]
    pub path_cap: Option<usize>,
    #[arg(long)]
    pub word: Option<String>,
    #[arg(long)]
    pub peripheral: Option<usize>,
    #[arg(long)]
    pub letter: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub f: Option<Vec<u64>>,
    /// square | sqrt | one | random
    #[arg(long)]
    pub function: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<u64>>,
}

impl Cli {
    pub fn overrides(&self) -> Params {
        Params {
            radius: self.radius,
            depth: self.depth,
            margin: self.margin,
            epsilon: self.epsilon,
            r: self.r,
            lambda: self.lambda,
            l: self.l.clone(),
            nmax: self.nmax,
            big_n: self.big_n,
            c_max: self.c_max,
            m: self.m,
            n: self.n,
            ns: self.ns.clone(),
            seed: self.seed,
            samples: self.samples,
            mode: self.mode.clone(),
            method: self.method.clone(),
            space: self.space.clone(),
            budget: self.budget,
            pair_threshold: self.pair_threshold,
            path_cap: self.path_cap,
            word: self.word.clone(),
            peripheral: self.peripheral,
            letter: self.letter.clone(),
            f: self.f.clone(),
            function: self.function.clone(),
            weights: self.weights.clone(),
        }
    }
}
