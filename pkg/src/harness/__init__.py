"""扫描与验证模块"""
