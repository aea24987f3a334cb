mod common;

use common::{cycle_soundness, prism_soundness};

#[test]
fn no_cycle_canvas_falsely_discarded() {
    let (checked, critical, false_discards) = cycle_soundness(9, 9);
    assert!(false_discards.is_empty(), "{false_discards:?}");
    assert!(checked > 20, "{checked}");
    // the 5-wheel at least
    assert!(critical >= 1);
}

#[test]
fn no_prism_canvas_falsely_discarded() {
    let (checked, false_discards) = prism_soundness(1, 9);
    assert!(false_discards.is_empty(), "{false_discards:?}");
    assert!(checked > 10, "{checked}");
}
