//! Optimize Holevo variance over scheme classes and rebuild the
//! comparison table.
//!
//! Uses a reduced restart budget to stay quick; the acceptance suite runs
//! the full budget. Run with: cargo run --release --example optimize_schemes

use phasim::scheme::{self, SchemeSpec, StateClass};

fn main() -> phasim::Result<()> {
    let restarts = 60;
    let seed = 90210;

    println!("individual schemes ({restarts} restarts each):");
    for (label, allocation, class, adaptive) in [
        (
            "symmetric, single passes, adaptive",
            vec![1u32, 1, 1],
            StateClass::Symmetric,
            true,
        ),
        (
            "separable, single passes, adaptive",
            vec![1, 1, 1],
            StateClass::Separable,
            true,
        ),
        (
            "symmetric, single passes, fixed θ",
            vec![1, 1, 1],
            StateClass::Symmetric,
            false,
        ),
        (
            "general, single passes, fixed θ",
            vec![1, 1, 1],
            StateClass::General,
            false,
        ),
        (
            "two-one split, adaptive",
            vec![2, 1],
            StateClass::General,
            true,
        ),
        (
            "two-one split, fixed θ",
            vec![2, 1],
            StateClass::General,
            false,
        ),
        (
            "one photon, three passes",
            vec![3],
            StateClass::General,
            true,
        ),
    ] {
        let spec = SchemeSpec::new(allocation, class, adaptive)?;
        let result = scheme::optimize_scheme(&spec, restarts, seed)?;
        println!("  {label:40} -> {:.12}", result.best_variance);
    }

    println!("\nscheme-comparison table (live, {restarts} restarts):");
    println!("  sym multi adapt   variance        reference");
    for row in scheme::table2_report(restarts, seed)? {
        let mark = |b: bool| if b { "y" } else { "n" };
        println!(
            "  {:3} {:5} {:5}   {:.10}    {:.10}{}",
            mark(row.symmetric_entanglement),
            mark(row.multipass),
            mark(row.adaptive),
            row.variance,
            row.reference,
            match row.experimental {
                Some(v) => format!("   (measured elsewhere: {v})"),
                None => String::new(),
            }
        );
    }
    Ok(())
}
