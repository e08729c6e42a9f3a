//! Shipped toy crystal data.

use super::datum::FCrystalDatum;
use crate::error::Result;

const FILES: &[(&str, &str)] = &[
    ("zero", include_str!("../../fixtures/crystals/zero.json")),
    ("torsion-free-minimal", include_str!("../../fixtures/crystals/torsion-free-minimal.json")),
    ("ordinary-curve-h1", include_str!("../../fixtures/crystals/ordinary-curve-h1.json")),
    ("f1-torsion-p2", include_str!("../../fixtures/crystals/f1-torsion-p2.json")),
    ("f1-torsion-p3", include_str!("../../fixtures/crystals/f1-torsion-p3.json")),
    ("f1-torsion-f4", include_str!("../../fixtures/crystals/f1-torsion-f4.json")),
    ("chain-extends", include_str!("../../fixtures/crystals/chain-extends.json")),
    ("chain-breaks-at-three", include_str!("../../fixtures/crystals/chain-breaks-at-three.json")),
    ("mixed-ordinary-plus-chain", include_str!("../../fixtures/crystals/mixed-ordinary-plus-chain.json")),
    ("order-p2-obstructed", include_str!("../../fixtures/crystals/order-p2-obstructed.json")),
    ("order-p2-unobstructed", include_str!("../../fixtures/crystals/order-p2-unobstructed.json")),
];

pub fn library_names() -> Vec<&'static str> {
    FILES.iter().map(|(n, _)| *n).collect()
}

pub fn library_datum(name: &str) -> Option<Result<FCrystalDatum>> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, text)| FCrystalDatum::from_json(text))
}

pub fn library() -> Result<Vec<FCrystalDatum>> {
    FILES.iter().map(|(_, text)| FCrystalDatum::from_json(text)).collect()
}
