mod common;

use dlforecast_core::bulletin::{UncertaintyHook, BulletinDocument};
use dlforecast_core::theory::DefeasibleTheory;
use dlforecast_core::tournament::BiasedBlend;
use dlforecast_core::{
    conclusions, extract_scenario, oracle_conclusions, run_pipeline, Format, LexiconTable, PipelineOptions,
    PipelineRun, Templates, TimeRef,
};
use rust_decimal::Decimal;

fn run(format: Format, templates: &Templates) -> PipelineRun {
    let kb = common::veneto_kb();
    let lexicon = LexiconTable::default();
    let opts = PipelineOptions {
        kb: &kb,
        now: TimeRef::Horizon(0),
        strategy: &BiasedBlend,
        lexicon: &lexicon,
        templates,
        format,
    };
    run_pipeline(&common::veneto_maps(), &opts).unwrap()
}

#[test]
fn day_after_tomorrow_section() {
    let text = run(Format::Text, &Templates::default()).rendered;
    let section = text.split("\n\n").find(|s| s.starts_with("Day after tomorrow\n")).unwrap();
    // The default blend gives 0.8 * 30 + 0.2 * 90 = 42% cloud cover here.
    assert!(section.contains("North: Mostly Cloudy, Light Winds from North.\n"), "{section}");
    assert!(section.contains("Sea: Calm."), "{section}");
    assert!(text.starts_with("Weather bulletin\nIssued: h0\nSources: ecmwf, gfs\n"), "{text}");
    assert!(text.contains("\nCurrent conditions\nNorth: Cloudy, Moderate Winds from North East.\n"), "{text}");
}

#[test]
fn scenario_covers_every_slot() {
    let run = run(Format::Text, &Templates::default());
    let scenario = extract_scenario(&run.conclusions).unwrap();
    for h in 0..=2 {
        assert_eq!(scenario.entries.keys().filter(|s| s.horizon == h).count(), 7, "h{h}");
    }
    for entry in scenario.entries.values() {
        assert!(run.conclusions.has(entry.tag, &entry.witness));
    }
}

#[test]
fn json_output_parses_back() {
    let run = run(Format::Json, &Templates::default());
    let doc: BulletinDocument = serde_json::from_str(&run.rendered).unwrap();
    assert_eq!(doc, run.document);
}

#[test]
fn output_is_deterministic() {
    for format in [Format::Text, Format::Html, Format::Json] {
        assert_eq!(run(format, &Templates::default()).rendered, run(format, &Templates::default()).rendered);
    }
}

#[test]
fn uncertainty_hook_marks_close_calls() {
    let templates = Templates {
        uncertainty: Some(UncertaintyHook {
            threshold: Decimal::new(5, 1),
            adjective: "possible".into(),
        }),
        ..Templates::default()
    };
    let text = run(Format::Text, &templates).rendered;
    // Every contested margin is 0.4, below the 0.5 threshold.
    assert!(text.contains("North: possible Mostly Cloudy"), "{text}");
}

#[test]
fn single_slot_matches_oracle() {
    let full = common::fixture_theory("veneto/theory.dl");
    let mut slot = DefeasibleTheory::new();
    for rule in full.rules().filter(|r| r.head.atom().starts_with("CNorth_") && !r.head.atom().contains("_h0_")) {
        slot.add_rule(rule.clone()).unwrap();
    }
    for (w, l) in full.superiority() {
        if slot.rule(w).is_some() && slot.rule(l).is_some() {
            slot.add_superiority(w, l).unwrap();
        }
    }
    assert_eq!(oracle_conclusions(&slot).unwrap(), conclusions(&slot));
}
