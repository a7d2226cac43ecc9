//! Loads a TOML config, prints the normalized document and checks that it
//! parses back to the same value.

use carrot_guide::io::{config_to_toml, parse_config};

const CONFIG: &str = r#"
v_a = 25
dt = 0.05
integrator = "reference"

[guidance]
law = "P_CTE"
K1 = 0.5
K2 = 35
delta = 5
saturation = "upper_only"

[initial]
x = 10
y = 28
psi = 0.9
"#;

fn main() {
    let config = parse_config(CONFIG).unwrap();
    let text = config_to_toml(&config);
    print!("{text}");
    assert_eq!(parse_config(&text).unwrap(), config);

    match parse_config("[guidance]\ngain = 2\n") {
        Err(err) => println!("typo rejected: {err}"),
        Ok(_) => unreachable!(),
    }
}
