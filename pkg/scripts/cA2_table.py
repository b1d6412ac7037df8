"""Print the cA/2 quotient table from constructed covers and their companions."""
from realterm.cli import parse_polynomial
from realterm.normal_form import classify
from realterm.quotient import GradedAction, companion, quotient_link

COVERS = [
    "t",
    "x^2 - y^2 + z^2*t - t^3",
    "x^2 - y^2 + z^6 - t^6",
    "x^2 - y^2 + z^4 + t^4",
    "x^2 + y^2 + z^2*t - t^3",
    "x^2 + y^2 + z^2 - t^4",
    "x^2 + y^2 - z^6 + t^6",
    "x^2 + y^2 - z^4 - t^4",
]


def tag(F):
    cls = classify(F)
    return cls.family if cls.family == "cA0" else cls.params["sign_case"]


def main():
    act = GradedAction.parse("1/2(1,1,1,0)")
    print(f"{'cover':28s} {'case':9s} {'companion':28s} {'case':9s} link")
    for text in COVERS:
        F = parse_polynomial(text)
        Fc = companion(F, act).Fc
        res = quotient_link(F, act)
        print(f"{text:28s} {tag(F):9s} {Fc.to_str():28s} {tag(Fc):9s} {res.descriptor}")


if __name__ == "__main__":
    main()
