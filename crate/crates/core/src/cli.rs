//! Command-line surface. Exit codes: 0 success, 1 domain errors (below
//! threshold, format violations, scheme failures), 2 usage errors. All
//! randomness flows from an explicit `--seed`, so equal invocations produce
//! byte-identical output files.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::analyzer::{posterior_feasibility_capped, AnalyzerError, DEFAULT_FEASIBILITY_CAP};
use crate::dot::graph_to_dot;
use crate::fileio::{
    parse_graph, parse_graph_share, parse_set_share, parse_shamir_share, write_graph,
    write_graph_share, write_set_share, write_shamir_share, FormatError, ParseError,
};
use crate::graph::{pair_count, GraphError, Label};
use crate::graph_scheme::{
    graph_deal, graph_reconstruct, min_padding, DealParams, GraphSchemeError, GraphSecret,
};
use crate::password::{
    graph_to_password, password_to_rank, rank_to_graph, Password, PasswordError,
};
use crate::set_scheme::{
    set_deal, set_deal_general, set_reconstruct, SetSchemeError, SetSecret, Token, TokenRng,
};
use crate::shamir::{compare_cost, shamir_deal, shamir_reconstruct, ShamirError, ShamirParams};

#[derive(Parser)]
#[command(name = "graphshare", version, about = "Threshold secret sharing for graphs, sets and passwords, reconstructed by intersection")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Split a secret set of tokens into n shares
    DealSet {
        /// Comma-separated secret tokens
        #[arg(long)]
        elements: Option<String>,
        /// File holding one secret token per line
        #[arg(long)]
        secret_file: Option<PathBuf>,
        /// Number of shares
        #[arg(long)]
        n: usize,
        /// Threshold: how many shares reconstruct the secret
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// RNG seed; equal seeds give byte-identical shares
        #[arg(long)]
        seed: u64,
        /// Directory for share1.sshare .. shareN.sshare
        #[arg(long)]
        out: PathBuf,
    },
    /// Intersect set shares to recover the secret
    CombineSet {
        /// Share files (.sshare)
        #[arg(required = true)]
        shares: Vec<PathBuf>,
        /// Intersect even below the threshold (analysis only)
        #[arg(long)]
        force: bool,
    },
    /// Split a secret graph into n shares
    DealGraph {
        /// Secret graph file (.g) on nodes 0..c-1
        #[arg(long)]
        secret: PathBuf,
        /// Comma-separated public node names, strictly increasing
        #[arg(long)]
        alphabet: String,
        /// Number of shares
        #[arg(long)]
        n: usize,
        /// Padding node count, or "auto" for the security floor
        #[arg(long, default_value = "auto")]
        b: String,
        /// Allow padding below the security floor
        #[arg(long)]
        insecure: bool,
        /// Probability of wiring each padding-node pair
        #[arg(long, default_value_t = 0.5)]
        edge_fill_prob: f64,
        /// Probability of augmenting each share from the edge ledger
        #[arg(long, default_value_t = 0.5)]
        augment_prob: f64,
        /// Random clique placement attempts before the deterministic scan
        #[arg(long, default_value_t = 64)]
        max_plant_retries: usize,
        /// RNG seed; equal seeds give byte-identical shares
        #[arg(long)]
        seed: u64,
        /// Directory for share1.gshare .. shareN.gshare
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover a secret graph from two shares
    CombineGraph {
        share_a: PathBuf,
        share_b: PathBuf,
        /// Write the recovered secret (.g) here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List which candidate secrets a single share leaves feasible
    Analyze {
        /// Share file (.gshare)
        share: PathBuf,
        /// Largest secret node count to enumerate exhaustively
        #[arg(long, default_value_t = DEFAULT_FEASIBILITY_CAP)]
        cap: usize,
    },
    /// Encode a password as a graph on 11 nodes
    EncodePassword {
        /// The password; omit to be prompted without echo
        #[arg(long)]
        password: Option<String>,
        /// Write the graph (.g) here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decode a password graph back into the password
    DecodePassword {
        /// Graph file (.g) on nodes 0..10
        graph: PathBuf,
    },
    /// Split an integer secret with the Shamir (2, n) baseline
    ShamirDeal {
        /// The secret, a residue modulo p
        #[arg(long)]
        secret: u64,
        /// Prime modulus
        #[arg(long, default_value_t = 2_147_483_647)]
        p: u64,
        /// Number of shares
        #[arg(long)]
        n: usize,
        /// RNG seed; equal seeds give byte-identical shares
        #[arg(long)]
        seed: u64,
        /// Directory for share1.pshare .. shareN.pshare
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover a Shamir-shared secret from two point shares
    ShamirCombine {
        share_a: PathBuf,
        share_b: PathBuf,
    },
    /// Compare reconstruction operation counts of both schemes
    CompareCost {
        /// Secret node count
        #[arg(long)]
        c: usize,
        /// Padding node count
        #[arg(long)]
        b: usize,
        /// Field width of the Shamir baseline in bits
        #[arg(long)]
        bits: u32,
    },
    /// Render a graph (.g) or share (.gshare) as Graphviz DOT
    ExportDot {
        input: PathBuf,
        /// Write DOT here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    BadFile { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    SetScheme(#[from] SetSchemeError),
    #[error(transparent)]
    GraphScheme(#[from] GraphSchemeError),
    #[error(transparent)]
    Password(#[from] PasswordError),
    #[error(transparent)]
    Shamir(#[from] ShamirError),
    #[error(transparent)]
    Analyzer(#[from] AnalyzerError),
    #[error(transparent)]
    Format(#[from] FormatError),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

/// Parses and runs a full command line (`argv[0]` included), mapping every
/// outcome to the documented exit codes.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn bad_file(path: &Path) -> impl FnOnce(ParseError) -> CliError + '_ {
    move |source| CliError::BadFile {
        path: path.to_path_buf(),
        source,
    }
}

fn join_labels(labels: &[Label]) -> String {
    labels
        .iter()
        .map(Label::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn secret_tokens(
    elements: Option<String>,
    secret_file: Option<PathBuf>,
) -> Result<BTreeSet<Token>, CliError> {
    let raw: Vec<String> = match (elements, secret_file) {
        (Some(csv), None) => csv.split(',').map(str::to_string).collect(),
        (None, Some(path)) => read(&path)?.lines().map(str::to_string).collect(),
        _ => {
            return Err(CliError::Usage(
                "give the secret with exactly one of --elements or --secret-file".into(),
            ))
        }
    };
    let mut tokens = BTreeSet::new();
    for t in raw {
        let token = Token::new(t.clone().into_bytes())
            .map_err(|_| CliError::Usage("secret tokens must be non-empty".into()))?;
        if !tokens.insert(token) {
            return Err(CliError::Usage(format!("duplicate secret token `{t}`")));
        }
    }
    Ok(tokens)
}

fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::DealSet {
            elements,
            secret_file,
            n,
            k,
            seed,
            out,
        } => {
            let secret = SetSecret::new(secret_tokens(elements, secret_file)?)?;
            let mut rng = TokenRng::new(ChaCha12Rng::seed_from_u64(seed));
            let shares = if k == 3 {
                set_deal(&secret, n, &mut rng)?
            } else {
                set_deal_general(&secret, k, n, &mut rng)?
            };
            create_dir(&out)?;
            for share in &shares {
                let path = out.join(format!("share{}.sshare", share.index()));
                write_file(&path, &write_set_share(share)?)?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }

        Command::CombineSet { shares, force } => {
            let parsed: Vec<_> = shares
                .iter()
                .map(|path| parse_set_share(&read(path)?).map_err(bad_file(path)))
                .collect::<Result<_, _>>()?;
            let result = set_reconstruct(&parsed, force)?;
            if result.below_threshold {
                eprintln!(
                    "warning: {} shares are below the threshold k = {}; the intersection still contains junk",
                    parsed.len(),
                    parsed[0].k()
                );
            }
            for token in &result.elements {
                println!("{token}");
            }
            Ok(())
        }

        Command::DealGraph {
            secret,
            alphabet,
            n,
            b,
            insecure,
            edge_fill_prob,
            augment_prob,
            max_plant_retries,
            seed,
            out,
        } => {
            let graph = parse_graph(&read(&secret)?).map_err(bad_file(&secret))?;
            let alphabet: Vec<String> = alphabet.split(',').map(str::to_string).collect();
            let secret = GraphSecret::new(alphabet, graph)?;
            let b = match b.as_str() {
                "auto" => min_padding(secret.node_count()),
                other => other.parse().map_err(|_| {
                    CliError::Usage(format!("--b takes a number or \"auto\", got `{other}`"))
                })?,
            };
            let params = DealParams {
                n,
                b,
                edge_fill_prob,
                augment_prob,
                max_plant_retries,
                allow_insecure: insecure,
            };
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let shares = graph_deal(&secret, &params, &mut rng)?;
            create_dir(&out)?;
            println!(
                "secret labels: {}",
                join_labels(shares[0].secret_labels().expect("dealer audit"))
            );
            for share in &shares {
                let path = out.join(format!("share{}.gshare", share.index()));
                write_file(&path, &write_graph_share(share))?;
                println!(
                    "wrote {} (planted clique at {})",
                    path.display(),
                    join_labels(share.planted().expect("dealer audit"))
                );
            }
            Ok(())
        }

        Command::CombineGraph {
            share_a,
            share_b,
            out,
        } => {
            let a = parse_graph_share(&read(&share_a)?).map_err(bad_file(&share_a))?;
            let b = parse_graph_share(&read(&share_b)?).map_err(bad_file(&share_b))?;
            let secret = graph_reconstruct(&a, &b)?;
            let text = write_graph(secret.graph());
            match out {
                Some(path) => {
                    write_file(&path, &text)?;
                    println!(
                        "recovered secret over alphabet {} -> {}",
                        secret.alphabet().join(","),
                        path.display()
                    );
                }
                None => print!("{text}"),
            }
            Ok(())
        }

        Command::Analyze { share, cap } => {
            let parsed = parse_graph_share(&read(&share)?).map_err(bad_file(&share))?;
            let report = posterior_feasibility_capped(&parsed, cap)?;
            let width = pair_count(report.c).max(1);
            println!("{:<width$}  {:<8}  witness", "candidate", "feasible", width = width.max(9));
            for entry in &report.per_candidate {
                let mask = format!("{:0width$b}", entry.mask, width = width);
                let witness = entry
                    .witness
                    .as_ref()
                    .map(|w| join_labels(&w.nodes))
                    .unwrap_or_else(|| "-".into());
                println!(
                    "{:<width$}  {:<8}  {witness}",
                    mask,
                    if entry.feasible { "yes" } else { "no" },
                    width = width.max(9)
                );
            }
            if report.all_feasible() {
                println!(
                    "verdict: {}/{} candidates feasible; no candidate secret is ruled out",
                    report.feasible_count, report.candidates
                );
            } else {
                println!(
                    "verdict: {}/{} candidates feasible; this share leaks information",
                    report.feasible_count, report.candidates
                );
            }
            Ok(())
        }

        Command::EncodePassword { password, out } => {
            let raw = match password {
                Some(p) => p,
                None => rpassword::prompt_password("password: ").map_err(|source| {
                    CliError::Io {
                        path: PathBuf::from("<tty>"),
                        source,
                    }
                })?,
            };
            let graph = rank_to_graph(password_to_rank(&Password::new(&raw)?));
            let text = write_graph(&graph);
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(())
        }

        Command::DecodePassword { graph } => {
            let parsed = parse_graph(&read(&graph)?).map_err(bad_file(&graph))?;
            println!("{}", graph_to_password(&parsed)?);
            Ok(())
        }

        Command::ShamirDeal {
            secret,
            p,
            n,
            seed,
            out,
        } => {
            let params = ShamirParams::new(p, n)?;
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            let shares = shamir_deal(secret, &params, &mut rng)?;
            create_dir(&out)?;
            for (i, share) in shares.iter().enumerate() {
                let path = out.join(format!("share{}.pshare", i + 1));
                write_file(&path, &write_shamir_share(p, share))?;
                println!("wrote {}", path.display());
            }
            Ok(())
        }

        Command::ShamirCombine { share_a, share_b } => {
            let (p1, s1) = parse_shamir_share(&read(&share_a)?).map_err(bad_file(&share_a))?;
            let (p2, s2) = parse_shamir_share(&read(&share_b)?).map_err(bad_file(&share_b))?;
            if p1 != p2 {
                return Err(CliError::Domain(format!(
                    "shares disagree on the modulus: {p1} vs {p2}"
                )));
            }
            println!("{}", shamir_reconstruct(&s1, &s2, p1)?);
            Ok(())
        }

        Command::CompareCost { c, b, bits } => {
            if c == 0 || bits == 0 {
                return Err(CliError::Usage(
                    "--c and --bits must be at least 1".into(),
                ));
            }
            let report = compare_cost(c, b, bits);
            println!("graph reconstruction steps: {}", report.graph_steps);
            println!("shamir basic operations: {}", report.shamir_ops);
            println!("shamir/graph ratio: {:.1}", report.ratio());
            Ok(())
        }

        Command::ExportDot { input, out } => {
            let text = read(&input)?;
            let graph = if text.lines().next() == Some("GRAPHSHARE v1") {
                parse_graph_share(&text)
                    .map_err(bad_file(&input))?
                    .graph()
                    .clone()
            } else {
                parse_graph(&text).map_err(bad_file(&input))?
            };
            let dot = graph_to_dot(&graph);
            match out {
                Some(path) => write_file(&path, &dot)?,
                None => print!("{dot}"),
            }
            Ok(())
        }
    }
}
