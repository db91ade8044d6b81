from catmod.homotopic.isograph import (
    IsoGraph, build_isograph, count_isographs, enumerate_isographs, extend_isograph, extends_to_isograph,
)
from catmod.homotopic.qc import (
    HomotopicModel, eval_homotopic, expand_definitions, homotopic_structure, i_definition, iso_definition,
    qc, qc_table,
)
from catmod.homotopic.qlim import qlim_holds, quasi_limit_witness
from catmod.homotopic.translate import compare_translation, translate_lcat
from catmod.homotopic.agree import AgreementReport, agreement_test, certificate, sentence_agreement
