#[test]
fn diag_table1_full() {
    let cells = hypsteep::tables::table1().unwrap();
    for c in &cells {
        let mark = if c.within { "ok " } else if c.flagged_exception { "EXC" } else { "BAD" };
        println!("{mark} s={} th={}: computed {:.4e} reference {:.4e}", c.s, c.theta_over_pi, c.computed, c.reference);
    }
    assert!(hypsteep::tables::table1_passes(&cells));
}

#[test]
fn diag_table2_full() {
    let cells = hypsteep::tables::table2().unwrap();
    for c in &cells {
        let mark = if c.within { "ok " } else { "BAD" };
        println!("{mark} th={} r={}: computed {:?} reference {:?} region={}", c.theta_over_pi, c.z_abs, c.computed, c.reference, c.region);
    }
    assert!(hypsteep::tables::table2_passes(&cells));
}
