//! Command-line front end for swept-circle collision analysis.
//!
//! Reads scenario JSON files and reports conflicts, unsafe start-time
//! intervals, avoidance maneuvers, and CSV plot data. Exit codes are part of
//! the interface so planners can script against them:
//!
//! - `0` — success (for `check`: no conflicts found)
//! - `1` — `check` found conflicts
//! - `2` — input or computation error
//! - `3` — `plot-data --what ellipse` on a configuration whose colliding
//!   region is not an ellipse
//!
//! All output is deterministic: identical invocations produce byte-identical
//! standard output.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use swept_circle::{
    check_scenario, collision_time_extent, conic_coefficients, cv_collision_interval,
    delay_branches_at_time, delay_range, min_velocity_change, parse_scenario, replanned_motion,
    unsafe_interval_accel, unsafe_interval_segmented, AvoidanceAction, ConflictKind,
    ConflictReport, DegenerateKind, DelayRange, LoadedScenario, Motion, Scenario, SearchConfig,
    TimeInterval, Tolerance, Vec2,
};

/// Closed-form collision analysis for circular agents on piecewise paths.
#[derive(Parser)]
#[command(name = "swept-circle", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Report every pairwise conflict in a scenario
    Check {
        /// Scenario JSON file
        scenario: PathBuf,
        /// Emit a JSON report instead of one line per conflict
        #[arg(long)]
        json: bool,
    },
    /// Unsafe start-time intervals for one segment pair
    UnsafeInterval {
        /// Scenario JSON file
        scenario: PathBuf,
        /// First agent and segment, as id:index
        #[arg(long, value_name = "ID:SEG", value_parser = parse_segment_ref)]
        a1: SegmentRef,
        /// Second agent and segment, as id:index
        #[arg(long, value_name = "ID:SEG", value_parser = parse_segment_ref)]
        a2: SegmentRef,
        /// Use the iterative search, required when segments accelerate
        #[arg(long)]
        accel: bool,
        /// Bracket width at which the iterative search stops, in seconds
        #[arg(long, default_value_t = 1e-6)]
        accuracy: f64,
    },
    /// Smallest velocity change (or wait) that avoids a predicted collision
    Avoid {
        /// Scenario JSON file (2D only)
        scenario: PathBuf,
        /// Agent and segment replanned first, as id:index
        #[arg(long, value_name = "ID:SEG", value_parser = parse_segment_ref)]
        a: SegmentRef,
        /// Other agent and segment, as id:index
        #[arg(long, value_name = "ID:SEG", value_parser = parse_segment_ref)]
        b: SegmentRef,
        /// Speed limit for the first agent
        #[arg(long)]
        vmax_a: f64,
        /// Speed limit for the second agent
        #[arg(long)]
        vmax_b: f64,
        /// Allow delaying the first agent when no velocity change works
        #[arg(long)]
        allow_wait: bool,
    },
    /// CSV samples of the squared edge distance or the start-offset ellipse
    PlotData {
        /// Scenario JSON file
        scenario: PathBuf,
        /// First agent and segment, as id:index
        #[arg(long, value_name = "ID:SEG", value_parser = parse_segment_ref)]
        a1: SegmentRef,
        /// Second agent and segment, as id:index
        #[arg(long, value_name = "ID:SEG", value_parser = parse_segment_ref)]
        a2: SegmentRef,
        /// Quantity to sample
        #[arg(long, value_enum)]
        what: PlotKind,
        /// Number of sample steps (rows are the step endpoints)
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum PlotKind {
    /// Squared distance between agent edges over the shared window
    Sqdist,
    /// Boundary of the colliding (time, start-offset) region
    Ellipse,
}

/// One agent segment, addressed as `id:index` on the command line.
#[derive(Clone, Debug)]
struct SegmentRef {
    id: String,
    seg: usize,
}

fn parse_segment_ref(raw: &str) -> Result<SegmentRef, String> {
    // Split on the last colon so agent ids may themselves contain colons.
    let Some((id, seg)) = raw.rsplit_once(':') else {
        return Err(String::from("expected id:segment, e.g. A:0"));
    };
    if id.is_empty() {
        return Err(String::from("agent id must be non-empty"));
    }
    let seg = seg
        .parse()
        .map_err(|_| format!("bad segment index {seg:?}"))?;
    Ok(SegmentRef { id: id.into(), seg })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Check { scenario, json } => match load(&scenario)? {
            LoadedScenario::D2(s) => cmd_check(&s, json),
            LoadedScenario::D3(s) => cmd_check(&s, json),
        },
        Command::UnsafeInterval {
            scenario,
            a1,
            a2,
            accel,
            accuracy,
        } => match load(&scenario)? {
            LoadedScenario::D2(s) => cmd_unsafe_interval(&s, &a1, &a2, accel, accuracy),
            LoadedScenario::D3(s) => cmd_unsafe_interval(&s, &a1, &a2, accel, accuracy),
        },
        Command::Avoid {
            scenario,
            a,
            b,
            vmax_a,
            vmax_b,
            allow_wait,
        } => match load(&scenario)? {
            LoadedScenario::D2(s) => cmd_avoid(&s, &a, &b, vmax_a, vmax_b, allow_wait),
            LoadedScenario::D3(_) => {
                bail!("avoid requires a 2D scenario: velocity obstacles are planar")
            }
        },
        Command::PlotData {
            scenario,
            a1,
            a2,
            what,
            samples,
        } => {
            ensure!(samples >= 1, "--samples must be at least 1");
            match load(&scenario)? {
                LoadedScenario::D2(s) => cmd_plot(&s, &a1, &a2, what, samples),
                LoadedScenario::D3(s) => cmd_plot(&s, &a1, &a2, what, samples),
            }
        }
    }
}

fn load(path: &PathBuf) -> Result<LoadedScenario> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    parse_scenario(&text).with_context(|| format!("cannot parse {}", path.display()))
}

fn find_segment<const D: usize>(scenario: &Scenario<D>, re: &SegmentRef) -> Result<Motion<D>> {
    let path = scenario
        .agents
        .iter()
        .find(|p| p.id == re.id)
        .with_context(|| format!("no agent {:?} in the scenario", re.id))?;
    path.segments.get(re.seg).copied().with_context(|| {
        format!(
            "agent {:?} has {} segment(s), no index {}",
            re.id,
            path.segments.len(),
            re.seg
        )
    })
}

fn cmd_check<const D: usize>(scenario: &Scenario<D>, json: bool) -> Result<ExitCode> {
    let tol = Tolerance::default();
    let reports = check_scenario(scenario, &tol)?;
    if json {
        println!("{}", check_report_json(scenario, &reports));
    } else {
        for r in &reports {
            println!(
                "{} {} {} {} {:.6} {:.6}",
                r.agent1, r.agent2, r.seg1, r.seg2, r.interval.start, r.interval.end
            );
        }
    }
    Ok(if reports.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn check_report_json<const D: usize>(
    scenario: &Scenario<D>,
    reports: &[ConflictReport],
) -> String {
    let conflicts: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| {
            serde_json::json!({
                "agent1": r.agent1,
                "agent2": r.agent2,
                "seg1": r.seg1,
                "seg2": r.seg2,
                "kind": kind_tag(r.kind),
                "t_start": r.interval.start,
                "t_end": r.interval.end,
            })
        })
        .collect();
    let body = serde_json::json!({
        "scenario": scenario.name,
        "conflict_count": reports.len(),
        "conflicts": conflicts,
    });
    serde_json::to_string_pretty(&body).expect("a conflict report always serializes")
}

fn kind_tag(kind: ConflictKind) -> &'static str {
    match kind {
        ConflictKind::ConstantVelocity => "cv",
        ConflictKind::Acceleration => "accel",
    }
}

fn cmd_unsafe_interval<const D: usize>(
    scenario: &Scenario<D>,
    a1: &SegmentRef,
    a2: &SegmentRef,
    accel: bool,
    accuracy: f64,
) -> Result<ExitCode> {
    let tol = Tolerance::default();
    let m1 = find_segment(scenario, a1)?;
    let m2 = find_segment(scenario, a2)?;
    let (interval1, interval2) = if accel {
        ensure!(
            accuracy.is_finite() && accuracy > 0.0,
            "--accuracy must be positive"
        );
        let cfg = SearchConfig {
            accuracy,
            max_iterations: 128,
        };
        (
            unsafe_interval_accel(&m1, &m2, &cfg, &tol)
                .context("searching start times for the first agent")?,
            unsafe_interval_accel(&m2, &m1, &cfg, &tol)
                .context("searching start times for the second agent")?,
        )
    } else {
        let r1 = unsafe_interval_segmented(&m1, &m2, &tol).context(
            "the closed form needs constant-velocity segments; pass --accel to search instead",
        )?;
        let r2 = unsafe_interval_segmented(&m2, &m1, &tol)?;
        if let Some(kind) = r1.degenerate {
            println!("degenerate: {}", degenerate_tag(kind));
        }
        (r1.unsafe_start_interval, r2.unsafe_start_interval)
    };
    if interval1.is_none() && interval2.is_none() {
        println!("NO COLLISION");
        return Ok(ExitCode::SUCCESS);
    }
    print_start_interval(&a1.id, interval1);
    print_start_interval(&a2.id, interval2);
    Ok(ExitCode::SUCCESS)
}

fn print_start_interval(id: &str, interval: Option<TimeInterval>) {
    match interval {
        Some(i) => println!("{id}: unsafe starts ({:.6}, {:.6})", i.start, i.end),
        None => println!("{id}: NO COLLISION"),
    }
}

fn degenerate_tag(kind: DegenerateKind) -> &'static str {
    match kind {
        DegenerateKind::ParallelMotion => "parallel-motion",
        DegenerateKind::WaitingAgent => "waiting-agent",
    }
}

fn cmd_avoid(
    scenario: &Scenario<2>,
    a: &SegmentRef,
    b: &SegmentRef,
    vmax_a: f64,
    vmax_b: f64,
    allow_wait: bool,
) -> Result<ExitCode> {
    let tol = Tolerance::default();
    let m1 = find_segment(scenario, a)?;
    let m2 = find_segment(scenario, b)?;
    match min_velocity_change(&m1, &m2, vmax_a, vmax_b, allow_wait, &tol)? {
        AvoidanceAction::NoCollision => println!("NO COLLISION"),
        AvoidanceAction::NewVelocityA(v) => {
            println!("new-velocity {} ({:.6}, {:.6})", a.id, v.x(), v.y());
            print_replan_verification(&m1, &m2, v, &tol)?;
        }
        AvoidanceAction::NewVelocityB(v) => {
            println!("new-velocity {} ({:.6}, {:.6})", b.id, v.x(), v.y());
            print_replan_verification(&m2, &m1, v, &tol)?;
        }
        AvoidanceAction::WaitDelay(d) => println!("wait delay={d:.6}"),
        AvoidanceAction::NoSolution => println!("NO SOLUTION"),
    }
    Ok(ExitCode::SUCCESS)
}

/// Re-runs detection on the replanned pair and prints the outcome, so the
/// reported maneuver carries its own evidence.
fn print_replan_verification(
    agent: &Motion<2>,
    other: &Motion<2>,
    v: Vec2,
    tol: &Tolerance,
) -> Result<()> {
    let t0 = agent.t_start.max(other.t_start);
    let Some(replanned) = replanned_motion(agent, t0, v) else {
        println!("verified: nothing left to traverse at the shared start");
        return Ok(());
    };
    match cv_collision_interval(&replanned, other, tol)? {
        None => println!("verified: no collision after the change"),
        Some(i) => println!(
            "verification FAILED: collision in ({:.6}, {:.6})",
            i.start, i.end
        ),
    }
    Ok(())
}

fn cmd_plot<const D: usize>(
    scenario: &Scenario<D>,
    a1: &SegmentRef,
    a2: &SegmentRef,
    what: PlotKind,
    samples: usize,
) -> Result<ExitCode> {
    let m1 = find_segment(scenario, a1)?;
    let m2 = find_segment(scenario, a2)?;
    match what {
        PlotKind::Sqdist => plot_sqdist(&m1, &m2, samples),
        PlotKind::Ellipse => plot_ellipse(&m1, &m2, samples),
    }
}

fn plot_sqdist<const D: usize>(m1: &Motion<D>, m2: &Motion<D>, samples: usize) -> Result<ExitCode> {
    let t0 = m1.t_start.max(m2.t_start);
    let t_max = m1.t_end.min(m2.t_end);
    ensure!(t0 < t_max, "the segments share no time window");
    ensure!(t_max.is_finite(), "cannot sample an unbounded shared window");
    let r_sum = m1.radius + m2.radius;
    println!("t,sq_edge_dist");
    for i in 0..=samples {
        let t = t0 + (t_max - t0) * (i as f64 / samples as f64);
        let gap = m1.position_at(t)? - m2.position_at(t)?;
        let sq_edge = gap.norm_sq() - r_sum * r_sum;
        println!("{t:.9},{sq_edge:.9}");
    }
    Ok(ExitCode::SUCCESS)
}

fn plot_ellipse<const D: usize>(
    m1: &Motion<D>,
    m2: &Motion<D>,
    samples: usize,
) -> Result<ExitCode> {
    let tol = Tolerance::default();
    let cc = conic_coefficients(m1, m2)
        .context("the offset ellipse needs constant-velocity segments")?;
    let (delta_lo, delta_hi) = match delay_range(&cc, &tol) {
        DelayRange::Degenerate(kind) => {
            eprintln!(
                "degenerate configuration ({}): the colliding region is a strip, not an ellipse",
                degenerate_tag(kind)
            );
            return Ok(ExitCode::from(3));
        }
        DelayRange::Never => {
            eprintln!("no collision region: no start offset brings the agents into contact");
            return Ok(ExitCode::from(3));
        }
        DelayRange::Range { lo, hi } => (lo, hi),
    };
    let (t_lo, t_hi) = collision_time_extent(&cc, &tol)
        .context("the ellipse has no time extent despite a real offset range")?;
    println!("center_t,center_delta");
    println!(
        "{:.9},{:.9}",
        0.5 * (t_lo + t_hi),
        0.5 * (delta_lo + delta_hi)
    );
    println!("t,delta");
    let t_at = |i: usize| t_lo + (t_hi - t_lo) * (i as f64 / samples as f64);
    // Upper branch swept left to right, then the lower branch right to
    // left, so consecutive rows trace the boundary as one closed loop.
    for i in 0..=samples {
        let t = t_at(i);
        if let Some((_, upper)) = delay_branches_at_time(&cc, t, &tol) {
            println!("{t:.9},{upper:.9}");
        }
    }
    for i in (0..=samples).rev() {
        let t = t_at(i);
        if let Some((lower, _)) = delay_branches_at_time(&cc, t, &tol) {
            println!("{t:.9},{lower:.9}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
