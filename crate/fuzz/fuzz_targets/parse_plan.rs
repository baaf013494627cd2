#![no_main]

use libfuzzer_sys::fuzz_target;
use wignerlift::harness::{parse_dims, parse_propositions, TrialPlan};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let (dims, props) = text.split_once(';').unwrap_or((text, ""));
    if let Ok(dims) = parse_dims(dims) {
        let plan = TrialPlan {
            dims,
            ..TrialPlan::default()
        };
        if plan.validate().is_ok() {
            for id in plan.propositions_in_order() {
                let _ = plan.instances_for(id);
            }
        }
    }
    if let Ok(ids) = parse_propositions(props) {
        for id in ids {
            assert_eq!(
                id.as_str()
                    .parse::<wignerlift::harness::PropositionId>()
                    .unwrap(),
                id
            );
        }
    }
});
