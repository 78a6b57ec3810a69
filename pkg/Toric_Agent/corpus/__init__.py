"""
示例语料 - 内置网络文件与端到端比对运行器
"""

from .runner import (
    BUNDLED_NETWORKS, CORPUS_EXPECTATIONS, RECOMBINATION_BINOMIALS, NETWORK_DIR,
    CorpusRow, CorpusReport, binomial_vector, bundled_path, load_bundled,
    sample_rates, run_network, run_corpus
)

__all__ = [
    'BUNDLED_NETWORKS', 'CORPUS_EXPECTATIONS', 'RECOMBINATION_BINOMIALS', 'NETWORK_DIR',
    'CorpusRow', 'CorpusReport', 'binomial_vector', 'bundled_path', 'load_bundled',
    'sample_rates', 'run_network', 'run_corpus'
]
