"""数值核心模块"""
