"""
Airdrop cost service package
Gas cost models, scenario sweeps and pooled-payment distributions for bulk token transfers
"""
