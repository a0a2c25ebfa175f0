//! A newcomer watches the ecosystem and tries to tell which norm is in force.
//!
//! cargo run --example norm_recognition

use normsys::ecosystem::{gen_ecosystem, norm_fifo, norm_round_robin, norm_skip2, EcoConfig};
use normsys::recognition::{
    check_nc1_witness, check_nc2_witness, decide_nc1, decide_nc2, NormFamily, RecognitionVerdict,
};

fn family(cancel: bool, skip: bool) -> normsys::Result<NormFamily> {
    let eco = gen_ecosystem(&EcoConfig::single_producer(3, true, cancel))?;
    let members =
        if skip { vec![norm_fifo(&eco), norm_skip2(&eco)] } else { vec![norm_round_robin(&eco), norm_fifo(&eco)] };
    let observer = eco.newcomer_agent().expect("newcomer present");
    NormFamily::observed_by(eco.mas.clone(), members, 0, observer)
}

fn report(title: &str, f: &NormFamily) -> normsys::Result<()> {
    let nc1 = decide_nc1(f);
    let nc2 = decide_nc2(f);
    println!("{title}");
    match &nc1 {
        RecognitionVerdict::Nc1Unsuccessful(w) => {
            check_nc1_witness(f, w)?;
            println!("  nc1 unsuccessful: runs agree forever (stem {}, loop {})", w.stem.len(), w.cycle.len());
        }
        _ => println!("  nc1 successful"),
    }
    match &nc2 {
        RecognitionVerdict::Nc2Successful(path) => {
            check_nc2_witness(f, path)?;
            let obs = f.extend_observation(path);
            println!("  nc2 successful after observing {obs:?}");
        }
        _ => println!("  nc2 unsuccessful"),
    }
    Ok(())
}

fn main() -> normsys::Result<()> {
    report("round robin vs fifo", &family(false, false)?)?;
    report("round robin vs fifo, newcomer may cancel", &family(true, false)?)?;
    report("fifo vs skip-two", &family(false, true)?)?;
    Ok(())
}
