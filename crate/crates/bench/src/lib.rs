//! Synthetic workloads for the benchmarks.

use dlforecast_core::model::{AssertionalMap, Compass, Label, Location};
use dlforecast_core::{Condition, KnowledgeBase, LabeledMap, MethodId, TimeRef, Value};
use rust_decimal::Decimal;

/// Forecast maps for `points` named points over horizons 1..=`horizons`, one
/// per model, with deterministic and mostly disagreeing values. Also returns a
/// knowledge base ranking the models.
pub fn synthetic_run(points: usize, horizons: u32, models: usize) -> (Vec<LabeledMap>, KnowledgeBase) {
    let mut kb = KnowledgeBase::new();
    let mut maps = Vec::new();
    for m in 0..models {
        let method = MethodId::new(format!("M{m}")).expect("valid method id");
        for h in 1..=horizons {
            let acc = Decimal::new(90 - 10 * m as i64 - h as i64, 2);
            kb.set_accuracy(method.clone(), h, acc).expect("accuracy in range");
        }
        let label = Label::new(method, TimeRef::Horizon(0));
        for p in 0..points {
            for h in 1..=horizons {
                let seed = (p * 31 + m * 17 + h as usize * 7) as i64;
                let at = |c: Condition, v: Value| {
                    let map = AssertionalMap::new(c, Location::named(format!("P{p}")), TimeRef::Horizon(h), v)
                        .expect("valid map");
                    LabeledMap::new(label.clone(), map)
                };
                maps.push(at(
                    Condition::Cloudiness,
                    Value::scalar(Condition::Cloudiness, seed % 101).expect("valid cloud"),
                ));
                maps.push(at(
                    Condition::Wind,
                    Value::wind(Compass::ALL[seed as usize % 8], seed % 40).expect("valid wind"),
                ));
            }
        }
    }
    (maps, kb)
}

#[cfg(test)]
mod tests {
    use super::*;
    use dlforecast_core::tournament::BiasedBlend;
    use dlforecast_core::{build_theory, conclusions};

    #[test]
    fn workload_is_fully_contested() {
        let (maps, kb) = synthetic_run(3, 2, 2);
        let t = build_theory(&maps, &kb, &TimeRef::Horizon(0), &BiasedBlend).unwrap();
        assert!(conclusions(&t.theory).undetermined.is_empty());
        assert!(t.contested().count() > 0);
    }
}
