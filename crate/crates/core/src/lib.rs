//! Defeasible-logic integration of competing weather forecasts.
//!
//! Labeled forecast maps from several numerical models are turned into a
//! defeasible theory ([`tournament`]), the theory is evaluated
//! ([`reasoner`]), and the winning scenario is classified and rendered as a
//! bulletin ([`lexicon`], [`bulletin`]).

pub mod bulletin;
pub mod error;
pub mod ingest;
pub mod kb;
pub mod lexicon;
pub mod model;
pub mod pipeline;
pub mod reasoner;
pub mod theory;
pub mod tournament;

pub use bulletin::{
    extract_scenario, render_document, render_sharp, render_smooth, BulletinDocument, Format, Templates,
    WeatherScenario,
};
pub use error::{Error, Result};
pub use ingest::{parse_source_map, validate_source_map, Diagnostic, Severity};
pub use kb::{load_kb, save_kb, KnowledgeBase, PriorityOverride};
pub use lexicon::{classify, direction_name, LexiconTable};
pub use model::{
    horizon_index, AssertionalMap, Compass, Condition, Horizon, Label, LabeledMap, Location, LocationRegistry,
    MethodId, TimeRef, Value,
};
pub use pipeline::{run_pipeline, PipelineOptions, PipelineRun, StageError};
pub use reasoner::{conclusions, oracle_conclusions, ConclusionSet, ProofTag};
pub use theory::{decode_atom, encode_atom, parse_theory, serialize_theory, DefeasibleTheory, Literal, Rule, RuleKind};
pub use tournament::{
    build_theory, prevails, sift, supremacy, Bias, BiasedBlend, Prevalence, SlotId, SupremacyStrategy, Tournament,
};
