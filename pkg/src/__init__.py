"""plurigreen - 三极点 Green 函数在双圆盘中的极限"""
