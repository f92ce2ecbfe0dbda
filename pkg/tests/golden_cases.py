"""The CLI golden suite: (name, argv, expected exit code).

Paths are relative to the repository root.
"""

E = "tests/data/expr/"

CASES = [
    ("eval_dirac", ["eval", "--dim", "2", "--expr", E + "dirac_2_2.json", "--point", "[2,2]"], 0),
    ("eval_half_root", ["eval", "--expr", E + "sqrt_minus1.json", "--point", "[0]", "--precision-bits", "64"], 0),
    ("eval_text", ["eval", "--expr", E + "n1sq_minus_1.json", "--point", "[3]", "--format", "text"], 0),
    ("cert_infer_poly", ["cert-infer", "--expr", E + "n1sq_minus_1.json", "--radius", "30"], 0),
    ("cert_audit_falsified", ["cert-audit", "--expr", E + "n1sq_minus_1.json", "--M", "1", "--m", "1", "--radius", "10"], 0),
    ("cert_audit_lower", ["cert-audit", "--expr", E + "inv3.json", "--delta", "1", "--m", "3", "--radius", "10"], 0),
    ("divides_one", ["divides", "--g", E + "one_d1.json", "--f", E + "n1sq_minus_1.json", "--radius", "20"], 0),
    ("divides_window", ["divides", "--g", E + "n1_plus_1.json", "--f", E + "n1sq_minus_1.json", "--radius", "20"], 2),
    ("divides_refuted", ["divides", "--g", E + "dc0.json", "--f", E + "n1_plus_1.json", "--radius", "20"], 0),
    ("invertible_yes", ["invertible", "--expr", E + "inv3.json", "--radius", "20"], 0),
    ("invertible_no", ["invertible", "--expr", E + "n1.json", "--radius", "20"], 0),
    ("gcd_pair", ["gcd", "--gens", E + "dc0.json", E + "dirac0.json"], 0),
    ("member_window", ["member", "--f", E + "one_d1.json", "--gens", E + "dc0.json", E + "dirac0.json", "--radius", "20"], 2),
    ("member_refuted", ["member", "--f", E + "one_d1.json", "--gens", E + "n1.json", "--radius", "20"], 0),
    ("principal", ["principal", "--gens", E + "n1.json", E + "n1_plus_1.json", "--radius", "15"], 2),
    ("maximal_member", ["maximal-member", "--expr", E + "n1_plus_1.json", "--point", "[3]", "--witness", "--radius", "10"], 0),
    ("nonfixed_yes", ["nonfixed-member", "--expr", E + "dirac0.json"], 0),
    ("nonfixed_no", ["nonfixed-member", "--expr", E + "inv3.json"], 0),
    ("nonfixed_empirical", ["nonfixed-member", "--expr", E + "mask1.json", "--J", "12"], 2),
    ("classify_not_prime", ["classify-prime", "--expr", E + "two_zeros.json", "--radius", "10"], 0),
    ("classify_fixed", ["classify-prime", "--expr", E + "dc_2_1.json", "--radius", "10"], 0),
    ("classify_not_proper", ["classify-prime", "--expr", E + "one_d1.json", "--radius", "10"], 0),
    ("separator", ["separator", "--n1", "[0,0]", "--n2", "[1,0]"], 0),
    ("zero_order_mask", ["zero-order", "--expr", E + "mask1.json", "--point", "[32]"], 0),
    ("zero_order_capped", ["zero-order", "--expr", E + "dirac0.json", "--point", "[1]", "--cap", "64"], 0),
    ("mask_value", ["mask", "--n", "1", "--point", "[58]"], 0),
    ("krull_i_n", ["krull-member", "--expr", E + "mask1.json", "--set", "i_n", "--n", "1"], 0),
    ("krull_M_n", ["krull-member", "--expr", E + "mask1.json", "--set", "M_n", "--n", "2"], 0),
    ("krull_i_star", ["krull-member", "--expr", E + "mask2.json", "--set", "i_star"], 0),
    ("chain_report_N1_K10", ["chain-report", "--N", "1", "--K", "10"], 0),
]
