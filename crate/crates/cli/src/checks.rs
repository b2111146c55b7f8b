//! Input-handling properties shared by the fuzz targets and the corpus
//! replay test. Each function accepts arbitrary bytes and panics only when a
//! property is violated.

use pihl_core::estimation::{covariant_mse, ProbeState};
use pihl_core::numerics::QuadratureSpec;
use pihl_core::priors::PriorSpec;

use crate::nlist::{parse_n_values, MAX_VALUES};

pub fn prior_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(spec) = PriorSpec::from_json(text) else {
        return;
    };
    let again = PriorSpec::from_json(&spec.to_json()).expect("serialized spec parses");
    assert_eq!(again, spec);
    // Loose tolerance keeps normalization integrals cheap.
    let quad = QuadratureSpec::new(1e-6, 1e-6, 20).expect("valid tolerance");
    if let Ok(prior) = spec.build(&quad) {
        if let Ok(d) = prior.density(0.0, &quad) {
            assert!(!(d < 0.0), "negative density {d}");
        }
    }
}

pub fn probe_state_json(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(state) = ProbeState::from_json(text) else {
        return;
    };
    let back = ProbeState::from_json(&state.to_json()).expect("serialized state parses");
    assert_eq!(back, state);
    if state.n() <= 4096 {
        let mse = covariant_mse(&state);
        assert!(mse.is_finite() && mse >= 0.0, "mse {mse}");
    }
}

pub fn n_values(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(values) = parse_n_values(text) {
        assert!(!values.is_empty() && values.len() <= MAX_VALUES);
        assert!(values.iter().all(|&n| n >= 1));
    }
}
