use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::curve::CurveModel;
use crate::modsym::{calibrated_newform, CalibratedForm};
use crate::twist::TwistEngine;

/// Calibrated built-in forms, computed once per test binary.
pub fn calibrated(label: &str) -> &'static CalibratedForm {
    static CACHE: OnceLock<Mutex<HashMap<String, &'static CalibratedForm>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let mut guard = cache.lock().unwrap();
    if let Some(f) = guard.get(label) {
        return f;
    }
    let curve = CurveModel::builtin(label).unwrap();
    let form: &'static CalibratedForm = Box::leak(Box::new(calibrated_newform(&curve, 128, 100).unwrap()));
    guard.insert(label.to_string(), form);
    form
}

pub fn engine(label: &str) -> TwistEngine<'static> {
    TwistEngine::new(&calibrated(label).form).unwrap()
}
