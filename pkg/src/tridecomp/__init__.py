# SPDX-FileCopyrightText: 2024-present tridecomp developers
#
# SPDX-License-Identifier: BSD-3-Clause
