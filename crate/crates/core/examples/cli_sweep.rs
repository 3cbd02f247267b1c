// Driving the command-line front end in process and reading its CSV back.

use std::error::Error;

use mqchain::cli;
use mqchain::table::parse_body;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let args = ["mqchain", "intensities", "--model", "finite", "--n-spins", "12", "--tau-grid", "0:1.5e-4:6"];
    let code = cli::run(args, &mut out, &mut err);
    let text = String::from_utf8(out)?;
    if code != cli::EXIT_OK {
        return Err(String::from_utf8(err)?.into());
    }
    print!("{text}");
    let (columns, rows) = parse_body(&text).ok_or("unparsable table")?;
    println!("{} columns, {} rows", columns.len(), rows.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
