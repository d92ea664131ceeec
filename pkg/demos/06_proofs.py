"""Hilbert-style proofs: the bundled corpus and the checker's rejections.

Run:  python demos/06_proofs.py
"""

from glpstar import SystemId, check_proof, corpus_proofs, decide, parse_proof

print("== the bundled corpus ==")
for name, text in corpus_proofs():
    proof = parse_proof(text)
    result = check_proof(proof)
    semantic = decide(proof.system, proof.goal).theorem
    print(f"  {name:28s} {proof.system.value:9s} "
          f"checker={'accepted' if result.accepted else 'rejected'} "
          f"decide={'theorem' if semantic else 'NON-THEOREM'}")

print("\n== a full derivation, line by line ==")
name, text = corpus_proofs()[0]
print(f"[{name}]")
print(text)

print("== what rejections look like ==")
BROKEN = [
    # monotonicity is not available in the base system
    ("system jstar\ngoal <1>p -> <0>p\n1. <1>p -> <0>p ; ax mono\n",
     "scheme unavailable"),
    # sigma-completeness needs the sort to fit under the modality
    ("system glpstar\ngoal <1>p:2 -> p:2\n1. <1>p:2 -> p:2 ; ax sigma\n",
     "side condition fails"),
    # the implication cited by modus ponens must match exactly
    ("system glpstar\ngoal p -> p\n"
     "1. T ; ax taut\n2. T -> (q -> q) ; ax taut\n3. p -> p ; mp 1 2\n",
     "modus ponens mismatch"),
]
for text, label in BROKEN:
    result = check_proof(parse_proof(text))
    print(f"  {label:24s} -> rejected at line {result.line}: {result.reason}")
