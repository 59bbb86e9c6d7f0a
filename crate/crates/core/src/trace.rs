//! Step traces of the auction and Goldberg–Kennedy solvers, and their
//! differential comparison.
//!
//! Both solvers pick the next unassigned (active) left vertex from a FIFO
//! queue seeded with `0..n`, and break reduced-cost ties toward the lowest
//! right index. Under that shared ordering a bid and a double push on the
//! same state produce the same [`TraceEvent`]. The event only carries data
//! both algorithms share: left-side prices and flow values of the
//! push-relabel solver are not part of it.
//!
//! Trace files hold one event per line, tab separated, in field order:
//!
//! ```text
//! phase step u best_v best_rc second_rc gamma new_price_v displaced_u
//! ```
//!
//! All fields are decimal integers; `displaced_u` is `-1` when no vertex
//! was displaced.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::WeightedBipartiteGraph;
use crate::solve::{Algorithm, SolveOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TraceEvent {
    pub phase_index: usize,
    pub step_index: usize,
    pub selected_u: usize,
    pub best_v: usize,
    pub best_reduced_cost: i64,
    pub second_reduced_cost: i64,
    pub gamma: i64,
    pub new_price_v: i64,
    pub displaced_u: Option<usize>,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let displaced = self.displaced_u.map_or(-1, |u| u as i64);
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.phase_index,
            self.step_index,
            self.selected_u,
            self.best_v,
            self.best_reduced_cost,
            self.second_reduced_cost,
            self.gamma,
            self.new_price_v,
            displaced
        )
    }
}

impl std::str::FromStr for TraceEvent {
    type Err = String;

    fn from_str(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 9 {
            return Err(format!("expected 9 fields, found {}", fields.len()));
        }
        let int = |i: usize| -> std::result::Result<i64, String> {
            fields[i]
                .trim()
                .parse::<i64>()
                .map_err(|_| format!("field {} is not an integer: {:?}", i + 1, fields[i]))
        };
        let index = |i: usize| -> std::result::Result<usize, String> {
            usize::try_from(int(i)?).map_err(|_| format!("field {} must be non-negative", i + 1))
        };
        let displaced = int(8)?;
        Ok(TraceEvent {
            phase_index: index(0)?,
            step_index: index(1)?,
            selected_u: index(2)?,
            best_v: index(3)?,
            best_reduced_cost: int(4)?,
            second_reduced_cost: int(5)?,
            gamma: int(6)?,
            new_price_v: int(7)?,
            displaced_u: match displaced {
                -1 => None,
                d if d >= 0 => Some(d as usize),
                d => return Err(format!("invalid displaced vertex {d}")),
            },
        })
    }
}

pub type Trace = Vec<TraceEvent>;

/// Append-only destination for solver steps.
pub trait TraceSink {
    fn record(&mut self, event: &TraceEvent) -> Result<()>;

    /// Solvers skip building events when this is false.
    fn enabled(&self) -> bool {
        true
    }
}

/// Discards everything.
#[derive(Debug, Default, Clone, Copy)]
pub struct NullSink;

impl TraceSink for NullSink {
    fn record(&mut self, _: &TraceEvent) -> Result<()> {
        Ok(())
    }

    fn enabled(&self) -> bool {
        false
    }
}

impl TraceSink for Vec<TraceEvent> {
    fn record(&mut self, event: &TraceEvent) -> Result<()> {
        self.push(*event);
        Ok(())
    }
}

/// Streams events to a writer in the trace file format.
pub struct TraceWriter<W: Write> {
    out: W,
}

impl<W: Write> TraceWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> TraceSink for TraceWriter<W> {
    fn record(&mut self, event: &TraceEvent) -> Result<()> {
        writeln!(self.out, "{event}")?;
        Ok(())
    }
}

/// Lazily parses a trace file, skipping blank lines.
pub fn read_trace<R: BufRead>(input: R) -> impl Iterator<Item = Result<TraceEvent>> {
    input
        .lines()
        .enumerate()
        .filter(|(_, l)| l.as_ref().map_or(true, |l| !l.trim().is_empty()))
        .map(|(i, line)| {
            let line = line?;
            line.parse().map_err(|msg| Error::Parse { line: i + 1, msg })
        })
}

/// Runs `algo` on `graph` and collects its full step sequence.
pub fn record_trace(algo: Algorithm, graph: &WeightedBipartiteGraph, alpha: f64) -> Result<Trace> {
    let mut trace = Trace::new();
    let opts = SolveOptions {
        alpha,
        ..SolveOptions::default()
    };
    match algo {
        Algorithm::Auction => {
            crate::auction::eps_scaling_auction_traced(graph, &opts, &mut trace)?;
        }
        Algorithm::GoldbergKennedy => {
            crate::gk::goldberg_kennedy_traced(graph, &opts, &mut trace)?;
        }
        Algorithm::Hungarian => {
            return Err(Error::InvalidParameter(
                "the Hungarian solver does not emit traces".into(),
            ))
        }
    }
    Ok(trace)
}

/// First position where two traces disagree. A missing side means that
/// trace ended early.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub index: usize,
    pub left: Option<TraceEvent>,
    pub right: Option<TraceEvent>,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |e: &Option<TraceEvent>| e.map_or_else(|| "<end of trace>".to_string(), |e| e.to_string());
        write!(
            f,
            "traces diverge at event {}\n  left:  {}\n  right: {}",
            self.index,
            show(&self.left),
            show(&self.right)
        )
    }
}

/// `None` iff the traces are identical event by event.
pub fn compare_traces(left: &[TraceEvent], right: &[TraceEvent]) -> Option<Divergence> {
    compare_trace_streams(left.iter().copied().map(Ok), right.iter().copied().map(Ok))
        .expect("in-memory traces cannot fail")
}

/// Streaming form of [`compare_traces`], for traces read from files.
pub fn compare_trace_streams<L, R>(left: L, right: R) -> Result<Option<Divergence>>
where
    L: IntoIterator<Item = Result<TraceEvent>>,
    R: IntoIterator<Item = Result<TraceEvent>>,
{
    let mut left = left.into_iter();
    let mut right = right.into_iter();
    let mut index = 0;
    loop {
        let a = left.next().transpose()?;
        let b = right.next().transpose()?;
        if a.is_none() && b.is_none() {
            return Ok(None);
        }
        if a != b {
            return Ok(Some(Divergence {
                index,
                left: a,
                right: b,
            }));
        }
        index += 1;
    }
}
