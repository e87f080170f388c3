from .contracts import MUTATIONS, contract_suite, shrink
from .corpus import CORPUS, hand_encoded_b3
from .mutations import MUTATION_NAMES, mutated_instance, run_mutation
from .report import (REPORT_SCHEMA, WITNESS_CAP, VerificationReport, compare_sets, gadget_log,
                     instance_hash, spurious_scan, verify_instance)

__all__ = [
    "CORPUS", "MUTATIONS", "MUTATION_NAMES", "REPORT_SCHEMA", "VerificationReport", "WITNESS_CAP",
    "compare_sets", "contract_suite", "gadget_log", "hand_encoded_b3", "instance_hash", "mutated_instance",
    "run_mutation", "shrink", "spurious_scan", "verify_instance",
]
