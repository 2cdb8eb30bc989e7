//! `dagchain path`: build a transition certificate between two connected
//! DAGs given as edge-list files, or replay an existing certificate.

use crate::{Outcome, UsageError};
use clap::Args;
use dagchain::proofpath::{build_path_with_breakdown, certificate_length_bound, PathCertificate};
use crate::formats::parse_edge_list;
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct PathArgs {
    /// Start graph, edge-list format.
    #[arg(long, value_name = "FILE", required_unless_present = "replay")]
    from: Option<PathBuf>,
    /// Target graph, edge-list format.
    #[arg(long, value_name = "FILE", required_unless_present = "replay")]
    to: Option<PathBuf>,
    /// Validate an existing certificate instead of building one.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["from", "to"])]
    replay: Option<PathBuf>,
    /// Vertex count, when the edge lists alone cannot determine it.
    #[arg(long)]
    n: Option<u32>,
    /// Print the per-phase move counts to standard error.
    #[arg(long)]
    breakdown: bool,
}

pub fn run(args: PathArgs) -> Result<Outcome, UsageError> {
    if let Some(cert_path) = args.replay {
        let text = read(&cert_path)?;
        let cert = PathCertificate::parse(&text).map_err(|e| UsageError(e.to_string()))?;
        return match cert.validate() {
            Ok(()) => {
                eprintln!(
                    "certificate ok: {} moves from {} arcs to {} arcs",
                    cert.len(),
                    cert.start().arc_count(),
                    cert.end().arc_count()
                );
                Ok(Outcome::Success)
            }
            Err(e) => {
                eprintln!("certificate invalid: {e}");
                Ok(Outcome::CheckFailed)
            }
        };
    }

    let (from, to) = (args.from.expect("clap enforces"), args.to.expect("clap enforces"));
    let g = load_graph(&from, args.n)?;
    let h = load_graph(&to, args.n.or(Some(g.n())))?;
    let (cert, breakdown) =
        build_path_with_breakdown(&g, &h).map_err(|e| UsageError(e.to_string()))?;
    if args.breakdown {
        eprintln!(
            "forward: {:?}\nbackward: {:?}\nlength {} <= bound {}",
            breakdown.forward,
            breakdown.backward,
            cert.len(),
            certificate_length_bound(g.n())
        );
    }
    print!("{}", cert.to_text());
    Ok(Outcome::Success)
}

fn read(path: &PathBuf) -> Result<String, UsageError> {
    std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn load_graph(path: &PathBuf, n: Option<u32>) -> Result<dagchain::Dag, UsageError> {
    let text = read(path)?;
    let g = parse_edge_list(&text, n).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    if !g.is_connected() {
        return Err(UsageError(format!("{}: graph is not connected", path.display())));
    }
    Ok(g)
}
