//! End-to-end run: labeled maps to rendered bulletin, one stage at a time.

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::bulletin::{extract_scenario, render_document, render_sharp, BulletinDocument, Format, Templates};
use crate::error::Error;
use crate::kb::KnowledgeBase;
use crate::lexicon::LexiconTable;
use crate::model::{LabeledMap, TimeRef};
use crate::reasoner::{conclusions, ConclusionSet};
use crate::tournament::{build_theory, SlotOutcome, SupremacyStrategy, Tournament};

#[derive(Debug, Error)]
#[error("{stage} stage failed: {error}")]
pub struct StageError {
    pub stage: &'static str,
    #[source]
    pub error: Error,
}

fn at(stage: &'static str) -> impl FnOnce(Error) -> StageError {
    move |error| StageError { stage, error }
}

pub struct PipelineOptions<'a> {
    pub kb: &'a KnowledgeBase,
    pub now: TimeRef,
    pub strategy: &'a dyn SupremacyStrategy,
    pub lexicon: &'a LexiconTable,
    pub templates: &'a Templates,
    pub format: Format,
}

#[derive(Debug)]
pub struct PipelineRun {
    pub tournament: Tournament,
    pub conclusions: ConclusionSet,
    pub document: BulletinDocument,
    pub rendered: String,
    pub timings: Vec<(&'static str, Duration)>,
}

/// Scenario, sharp terms and header for a conclusion set.
pub fn bulletin_from_conclusions(
    conclusions: &ConclusionSet,
    lexicon: &LexiconTable,
    now: Option<&TimeRef>,
) -> crate::Result<BulletinDocument> {
    let scenario = extract_scenario(conclusions)?;
    let mut doc = render_sharp(&scenario, lexicon)?;
    doc.generated_at = now.map(ToString::to_string);
    Ok(doc)
}

/// Copies each contested slot's deciding accuracy margin onto its bulletin item.
pub fn attach_margins(doc: &mut BulletinDocument, tournament: &Tournament) {
    for report in &tournament.slots {
        if let SlotOutcome::Contested { stages } = &report.outcome {
            if let (Some(stage), Some(item)) = (stages.last(), doc.item_mut(&report.slot)) {
                item.margin = Some(stage.margin);
            }
        }
    }
}

pub fn run_pipeline(lams: &[LabeledMap], opts: &PipelineOptions<'_>) -> Result<PipelineRun, StageError> {
    let mut timings = Vec::with_capacity(3);

    let start = Instant::now();
    let tournament = build_theory(lams, opts.kb, &opts.now, opts.strategy).map_err(at("tournament"))?;
    timings.push(("tournament", start.elapsed()));

    let start = Instant::now();
    let conclusions = conclusions(&tournament.theory);
    timings.push(("reason", start.elapsed()));

    let start = Instant::now();
    let mut document =
        bulletin_from_conclusions(&conclusions, opts.lexicon, Some(&opts.now)).map_err(at("bulletin"))?;
    // Margins only matter to the uncertainty hook; leaving them out otherwise
    // keeps the output identical to the stage-by-stage composition.
    if opts.templates.uncertainty.is_some() {
        attach_margins(&mut document, &tournament);
    }
    let rendered = render_document(&document, opts.format, opts.templates).map_err(at("bulletin"))?;
    timings.push(("bulletin", start.elapsed()));

    Ok(PipelineRun {
        tournament,
        conclusions,
        document,
        rendered,
        timings,
    })
}
